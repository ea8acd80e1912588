#include "timtin/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "timtin/error.hpp"

namespace timtin {

bool ChannelSpec::operator==(const ChannelSpec& other) const {
  if (K != other.K || alpha != other.alpha || P != other.P) return false;
  if (theta.has_value() != other.theta.has_value()) return false;
  return !theta || *theta == *other.theta;
}

QuantizationScheme::QuantizationScheme(std::vector<double> thresholds)
    : thresholds_(std::move(thresholds)) {
  if (thresholds_.empty()) {
    throw Error(ErrorCode::InvalidRange, "quantization needs at least one threshold");
  }
  for (std::size_t j = 0; j < thresholds_.size(); ++j) {
    if (!std::isfinite(thresholds_[j])) {
      throw Error(ErrorCode::InvalidRange, "thresholds must be finite");
    }
    if (j > 0 && !(thresholds_[j] > thresholds_[j - 1])) {
      throw Error(ErrorCode::InvalidRange, "thresholds must be strictly ascending");
    }
  }
  if (thresholds_.front() < 0.0) {
    throw Error(ErrorCode::InvalidRange, "first threshold must be >= 0");
  }
}

std::string link_class_name(const LinkClass& c, std::size_t levels) {
  switch (c.kind) {
    case LinkClass::Kind::Direct:
      return "direct";
    case LinkClass::Kind::Weak:
      return "weak";
    case LinkClass::Kind::Level:
      if (levels == 2) return c.level == 1 ? "medium" : "strong";
      if (levels == 1) return "strong";
      return "level-" + std::to_string(c.level);
  }
  return "unknown";
}

void validate(const ChannelSpec& spec) {
  if (spec.K <= 0) throw Error(ErrorCode::DimensionMismatch, "K must be positive");
  if (spec.alpha.rows() != spec.K || spec.alpha.cols() != spec.K) {
    std::ostringstream os;
    os << "alpha is " << spec.alpha.rows() << "x" << spec.alpha.cols() << " but K=" << spec.K;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (spec.theta && (spec.theta->rows() != spec.K || spec.theta->cols() != spec.K)) {
    throw Error(ErrorCode::DimensionMismatch, "theta shape differs from alpha");
  }
  for (int k = 0; k < spec.K; ++k) {
    for (int i = 0; i < spec.K; ++i) {
      const double a = spec.alpha(k, i);
      if (!std::isfinite(a) || a < 0.0) {
        std::ostringstream os;
        os << "alpha(" << k << "," << i << ") = " << a;
        throw Error(ErrorCode::NegativeExponent, os.str());
      }
    }
    if (!(spec.alpha(k, k) > 0.0)) {
      throw Error(ErrorCode::NonPositiveDirectLink,
                  "alpha(" + std::to_string(k) + "," + std::to_string(k) + ") must be > 0");
    }
  }
  if (spec.P && !(*spec.P > 1.0)) throw Error(ErrorCode::InvalidPower, "P must exceed 1");
}

ChannelSpec reciprocal(const ChannelSpec& spec) {
  ChannelSpec out;
  out.K = spec.K;
  out.alpha = spec.alpha.transpose();
  if (spec.theta) out.theta = Eigen::MatrixXd(spec.theta->transpose());
  out.P = spec.P;
  return out;
}

std::vector<std::vector<LinkClass>> classify_links(const ChannelSpec& spec,
                                                   const QuantizationScheme& q) {
  const auto& t = q.thresholds();
  const int levels = static_cast<int>(t.size());
  std::vector<std::vector<LinkClass>> out(spec.K, std::vector<LinkClass>(spec.K));
  for (int k = 0; k < spec.K; ++k) {
    for (int i = 0; i < spec.K; ++i) {
      LinkClass& c = out[k][i];
      const double a = spec.alpha(k, i);
      if (k == i) {
        c.kind = LinkClass::Kind::Direct;
      } else if (a <= t.front()) {
        c.kind = LinkClass::Kind::Weak;
      } else if (a >= t.back()) {
        c = {LinkClass::Kind::Level, levels};
      } else {
        int j = 1;
        while (j < levels && a >= t[j]) ++j;
        c = {LinkClass::Kind::Level, j};
      }
    }
  }
  return out;
}

ChannelSpec gen_cyclic_random(int K, double x, std::uint64_t seed) {
  if (K < 3) throw Error(ErrorCode::TooFewUsers, "cyclic model needs K >= 3");
  if (!(x >= 0.5 && x <= 1.0)) {
    throw Error(ErrorCode::InvalidRange, "x must lie in [0.5, 1]");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
  };
  ChannelSpec spec;
  spec.K = K;
  spec.alpha = Eigen::MatrixXd::Zero(K, K);
  Eigen::MatrixXd theta(K, K);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < K; ++i) {
      if (i == k) {
        spec.alpha(k, i) = 1.0;
      } else if (i == (k + 1) % K || i == (k + K - 1) % K) {
        spec.alpha(k, i) = uniform(x, 1.0);
      } else {
        spec.alpha(k, i) = uniform(0.0, 1.0 - x);
      }
    }
  }
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < K; ++i) theta(k, i) = uniform(0.0, 2.0 * std::numbers::pi);
  }
  spec.theta = theta;
  return spec;
}

int neighbor_distance(int a, int b, int K, NeighborLayout layout) {
  const int d = std::abs(a - b);
  return layout == NeighborLayout::Ring ? std::min(d, K - d) : d;
}

ChannelSpec gen_neighboring(int K, int S, int M, NeighborLayout layout, NeighborLevels levels) {
  if (S < 0 || M < 0) throw Error(ErrorCode::InvalidRange, "S and M must be non-negative");
  if (K < 1) throw Error(ErrorCode::TooFewUsers, "K must be positive");
  if (layout == NeighborLayout::Ring && K <= 2 * (S + M)) {
    throw Error(ErrorCode::TooFewUsers, "ring needs K > 2(S+M) to avoid wrap collisions");
  }
  ChannelSpec spec;
  spec.K = K;
  spec.alpha = Eigen::MatrixXd::Zero(K, K);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < K; ++i) {
      const int d = neighbor_distance(k, i, K, layout);
      if (d == 0) {
        spec.alpha(k, i) = 1.0;
      } else if (d <= S) {
        spec.alpha(k, i) = levels.strong;
      } else if (d <= S + M) {
        spec.alpha(k, i) = levels.medium;
      }
    }
  }
  return spec;
}

}  // namespace timtin
