#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace micromaser {

inline constexpr double kEpsPos = 1e-12;
inline constexpr double kEpsTrace = 1e-10;
inline constexpr double kTailThreshold = 1e-10;

/// Diagonal field state P(n) on the truncated Fock basis n = 0..n_max.
class PhotonDistribution {
 public:
  PhotonDistribution() = default;

  /// Wraps raw probabilities without normalizing them.
  explicit PhotonDistribution(std::vector<double> p, bool normalized = false);

  std::size_t n_max() const noexcept { return p_.empty() ? 0 : p_.size() - 1; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t n) const { return p_[n]; }
  std::span<const double> probabilities() const noexcept { return p_; }

  bool normalized() const noexcept { return normalized_; }
  double sum() const noexcept;

  /// True when the top level carries less than `threshold` probability.
  bool truncation_safe(double threshold = kTailThreshold) const noexcept;

  /// CSV body with header "n,p", shortest round-trip formatting.
  std::string to_csv() const;
  /// JSON array of probabilities.
  std::string to_json() const;
  static PhotonDistribution from_csv(const std::string& text);

  friend bool operator==(const PhotonDistribution&, const PhotonDistribution&) = default;

 private:
  std::vector<double> p_;
  bool normalized_ = false;
};

struct FieldStatistics {
  double mean_n = 0.0;
  double var_n = 0.0;
  double v = 0.0;  // sqrt(var_n / mean_n), 0 for the vacuum
};

// Bose-Einstein distribution renormalized over the kept levels. Throws
// TruncationUnsafe when the discarded tail is not below the threshold.
PhotonDistribution thermal_state(double n_bar, std::size_t n_max);

PhotonDistribution fock_state(std::size_t n, std::size_t n_max);

FieldStatistics statistics(const PhotonDistribution& d);

// Clamps round-off negatives and rescales to unit sum.
PhotonDistribution renormalize(const PhotonDistribution& d);

// Throws TruncationUnsafe if p[n_max] >= threshold. `where` prefixes the message.
void require_truncation_safe(const PhotonDistribution& d, const char* where,
                             double threshold = kTailThreshold);

}  // namespace micromaser
