#include "timtin/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "timtin/error.hpp"

namespace timtin {

namespace {

void check_keys(const Json& doc, std::initializer_list<const char*> allowed, const char* what) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an object");
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) {
      throw Error(ErrorCode::ParseError,
                  std::string("unknown key '") + item.key() + "' in " + what);
    }
  }
}

const Json& require(const Json& doc, const char* key, const char* what) {
  if (!doc.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string("missing key '") + key + "' in " + what);
  }
  return doc.at(key);
}

Eigen::MatrixXd matrix_from_json(const Json& rows, int K, const char* field) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != K) {
    throw Error(ErrorCode::DimensionMismatch, std::string(field) + " must have K rows");
  }
  Eigen::MatrixXd m(K, K);
  for (int i = 0; i < K; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != K) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::string(field) + " row " + std::to_string(i) + " must have K entries");
    }
    for (int j = 0; j < K; ++j) {
      if (!rows[i][j].is_number()) {
        throw Error(ErrorCode::ParseError, std::string(field) + " entries must be numbers");
      }
      m(i, j) = rows[i][j].get<double>();
    }
  }
  return m;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

cplx complex_from_json(const Json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw Error(ErrorCode::ParseError, "beam entries must be numbers or [re, im] pairs");
}

std::set<Link> links_from_json(const Json& arr, const char* field) {
  if (!arr.is_array()) throw Error(ErrorCode::ParseError, std::string(field) + " must be a list");
  std::set<Link> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
      throw Error(ErrorCode::ParseError,
                  std::string(field) + " entries must be [receiver, transmitter] integer pairs");
    }
    out.insert({p[0].get<int>(), p[1].get<int>()});
  }
  return out;
}

Json links_to_json(const std::set<Link>& links) {
  Json arr = Json::array();
  for (const auto& l : links) arr.push_back({l.first, l.second});
  return arr;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileIo, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FileIo, "cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::FileIo, "write failed for " + path);
}

Json channel_to_json(const ChannelSpec& spec) {
  Json doc;
  doc["K"] = spec.K;
  doc["alpha"] = matrix_to_json(spec.alpha);
  if (spec.theta) doc["theta"] = matrix_to_json(*spec.theta);
  if (spec.P) doc["P"] = *spec.P;
  return doc;
}

namespace {

ChannelSpec channel_fields(const Json& doc) {
  ChannelSpec spec;
  const Json& k = require(doc, "K", "channel");
  if (!k.is_number_integer()) throw Error(ErrorCode::ParseError, "K must be an integer");
  spec.K = k.get<int>();
  if (spec.K <= 0) throw Error(ErrorCode::DimensionMismatch, "K must be positive");
  spec.alpha = matrix_from_json(require(doc, "alpha", "channel"), spec.K, "alpha");
  if (doc.contains("theta")) spec.theta = matrix_from_json(doc.at("theta"), spec.K, "theta");
  if (doc.contains("P")) {
    if (!doc.at("P").is_number()) throw Error(ErrorCode::ParseError, "P must be a number");
    spec.P = doc.at("P").get<double>();
  }
  validate(spec);
  return spec;
}

}  // namespace

ChannelSpec channel_from_json(const Json& doc) {
  check_keys(doc, {"K", "alpha", "theta", "P"}, "channel");
  return channel_fields(doc);
}

Json tx_to_json(const TxConfig& tx) {
  Json doc;
  doc["n"] = tx.n;
  Json beams = Json::array();
  for (const auto& user : tx.beams) {
    Json streams = Json::array();
    for (const auto& v : user) {
      Json entries = Json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) entries.push_back({v(i).real(), v(i).imag()});
      streams.push_back(entries);
    }
    beams.push_back(streams);
  }
  doc["beams"] = beams;
  doc["powers"] = tx.powers;
  return doc;
}

TxConfig tx_from_json(const Json& doc) {
  check_keys(doc, {"n", "beams", "powers"}, "configuration");
  TxConfig tx;
  const Json& n = require(doc, "n", "configuration");
  if (!n.is_number_integer()) throw Error(ErrorCode::ParseError, "n must be an integer");
  tx.n = n.get<int>();
  const Json& beams = require(doc, "beams", "configuration");
  const Json& powers = require(doc, "powers", "configuration");
  if (!beams.is_array() || !powers.is_array() || beams.size() != powers.size()) {
    throw Error(ErrorCode::DimensionMismatch, "beams and powers must list the same users");
  }
  for (std::size_t k = 0; k < beams.size(); ++k) {
    if (!beams[k].is_array() || !powers[k].is_array() || beams[k].size() != powers[k].size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "user " + std::to_string(k) + ": one power per beam");
    }
    std::vector<CVector> user;
    for (const auto& entries : beams[k]) {
      if (!entries.is_array()) throw Error(ErrorCode::ParseError, "a beam must be a list");
      CVector v(static_cast<Eigen::Index>(entries.size()));
      for (std::size_t i = 0; i < entries.size(); ++i) v(i) = complex_from_json(entries[i]);
      user.push_back(v);
    }
    tx.beams.push_back(std::move(user));
    std::vector<double> p;
    for (const auto& r : powers[k]) {
      if (!r.is_number()) throw Error(ErrorCode::ParseError, "powers must be numbers");
      p.push_back(r.get<double>());
    }
    tx.powers.push_back(std::move(p));
  }
  validate(tx);
  return tx;
}

NeighborLayout layout_from_string(const std::string& s) {
  if (s == "ring") return NeighborLayout::Ring;
  if (s == "line") return NeighborLayout::Line;
  throw Error(ErrorCode::ParseError, "layout must be 'ring' or 'line', got '" + s + "'");
}

std::string to_string(NeighborLayout layout) {
  return layout == NeighborLayout::Ring ? "ring" : "line";
}

Json decomposition_to_json(const ChannelSpec& spec, const Decomposition& dec,
                           const std::optional<TimDescriptor>& tim) {
  Json doc = channel_to_json(spec);
  doc["tim_links"] = links_to_json(dec.tim_links);
  doc["tin_links"] = links_to_json(dec.tin_links);
  if (tim) {
    Json t;
    if (const auto* e = std::get_if<tim::Explicit>(&*tim)) {
      t["kind"] = "explicit";
      t["tx"] = tx_to_json(e->tx);
    } else if (std::holds_alternative<tim::Empty>(*tim)) {
      t["kind"] = "empty";
    } else if (std::holds_alternative<tim::FiveUserCycle>(*tim)) {
      t["kind"] = "five-user-cycle";
    } else {
      const auto& nb = std::get<tim::Neighboring>(*tim);
      t["kind"] = "neighboring";
      t["width"] = nb.width;
      t["layout"] = to_string(nb.layout);
    }
    doc["tim"] = t;
  }
  return doc;
}

DecompositionDoc decomposition_from_json(const Json& doc) {
  check_keys(doc, {"K", "alpha", "theta", "P", "tim_links", "tin_links", "tim", "threshold"},
             "decomposition");
  DecompositionDoc out;
  out.spec = channel_fields(doc);
  out.decomposition.tim_links = links_from_json(require(doc, "tim_links", "decomposition"), "tim_links");
  out.decomposition.tin_links = links_from_json(require(doc, "tin_links", "decomposition"), "tin_links");
  validate(out.decomposition, out.spec);
  if (doc.contains("threshold")) out.threshold = doc.at("threshold").get<double>();
  if (doc.contains("tim")) {
    const Json& t = doc.at("tim");
    check_keys(t, {"kind", "width", "layout", "tx"}, "tim");
    const std::string kind = require(t, "kind", "tim").get<std::string>();
    if (kind == "explicit") {
      out.tim = tim::Explicit{tx_from_json(require(t, "tx", "tim"))};
    } else if (kind == "empty") {
      out.tim = tim::Empty{};
    } else if (kind == "five-user-cycle") {
      out.tim = tim::FiveUserCycle{};
    } else if (kind == "neighboring") {
      tim::Neighboring nb;
      nb.width = require(t, "width", "tim").get<int>();
      if (t.contains("layout")) nb.layout = layout_from_string(t.at("layout").get<std::string>());
      out.tim = nb;
    } else {
      throw Error(ErrorCode::UnsupportedTopology, "unknown TIM construction '" + kind + "'");
    }
  }
  return out;
}

}  // namespace timtin
