#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "timtin/channel.hpp"
#include "timtin/decomposition.hpp"
#include "timtin/gdof.hpp"

namespace timtin {

using Json = nlohmann::json;

/// Reads and parses a JSON document; file-io / parse-error on failure.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

/// Channel document: K, alpha (row = receiver), optional theta and P.
Json channel_to_json(const ChannelSpec& spec);
ChannelSpec channel_from_json(const Json& doc);

/// Configuration document: n, beams[user][stream] as lists of [re, im]
/// entries (plain numbers are read as real), powers[user][stream].
Json tx_to_json(const TxConfig& tx);
TxConfig tx_from_json(const Json& doc);

/// Decomposition document: a channel document plus tim_links / tin_links as
/// [receiver, transmitter] pairs (zero-based) and an optional "tim" object
/// naming the construction: {"kind": "empty" | "five-user-cycle" |
/// "neighboring" (width, layout) | "explicit" (tx)}.
struct DecompositionDoc {
  ChannelSpec spec;
  Decomposition decomposition;
  std::optional<TimDescriptor> tim;
  std::optional<double> threshold;
};

Json decomposition_to_json(const ChannelSpec& spec, const Decomposition& dec,
                           const std::optional<TimDescriptor>& tim = std::nullopt);
DecompositionDoc decomposition_from_json(const Json& doc);

NeighborLayout layout_from_string(const std::string& s);
std::string to_string(NeighborLayout layout);

}  // namespace timtin
