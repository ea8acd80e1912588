#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace timtin {

/// A K-user interference channel given by its strength exponents.
///
/// Row index is the receiver, column index the transmitter, so alpha(k, i) is
/// the exponent of the link from transmitter i to receiver k. Phases are
/// carried for finite-SNR evaluation only; every GDoF computation ignores them.
struct ChannelSpec {
  int K = 0;
  Eigen::MatrixXd alpha;
  std::optional<Eigen::MatrixXd> theta;
  std::optional<double> P;

  bool operator==(const ChannelSpec& other) const;
};

/// Thresholds t_1 < ... < t_l used to quantize cross-link exponents.
class QuantizationScheme {
 public:
  explicit QuantizationScheme(std::vector<double> thresholds);

  const std::vector<double>& thresholds() const { return thresholds_; }
  std::size_t levels() const { return thresholds_.size(); }
  double top() const { return thresholds_.back(); }

 private:
  std::vector<double> thresholds_;
};

struct LinkClass {
  enum class Kind { Direct, Weak, Level };
  Kind kind = Kind::Weak;
  /// 1-based bin index for Kind::Level; level l (the last one) is the top bin.
  int level = 0;

  bool operator==(const LinkClass&) const = default;
};

/// "direct", "weak", and for two thresholds "medium"/"strong"; otherwise "level-j".
std::string link_class_name(const LinkClass& c, std::size_t levels);

enum class NeighborLayout { Ring, Line };

void validate(const ChannelSpec& spec);

ChannelSpec reciprocal(const ChannelSpec& spec);

std::vector<std::vector<LinkClass>> classify_links(const ChannelSpec& spec,
                                                   const QuantizationScheme& q);

/// Cyclic model: receiver i sees strong interference from i-1 and i+1 with
/// exponents uniform in [x, 1]; every other cross link is uniform in [0, 1-x].
ChannelSpec gen_cyclic_random(int K, double x, std::uint64_t seed);

struct NeighborLevels {
  double strong = 1.0;
  double medium = 0.5;
};

/// Symmetric neighboring channel: offsets 1..S are strong, S+1..S+M medium.
ChannelSpec gen_neighboring(int K, int S, int M, NeighborLayout layout,
                            NeighborLevels levels = {});

/// Cyclic distance between users on a ring, or plain distance on a line.
int neighbor_distance(int a, int b, int K, NeighborLayout layout);

}  // namespace timtin
