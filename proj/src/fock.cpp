#include "micromaser/fock.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "micromaser/error.hpp"
#include "micromaser/format.hpp"

namespace micromaser {

PhotonDistribution::PhotonDistribution(std::vector<double> p, bool normalized)
    : p_(std::move(p)), normalized_(normalized) {
  if (p_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "photon distribution needs at least one level");
  }
}

double PhotonDistribution::sum() const noexcept {
  double s = 0.0;
  for (double x : p_) s += x;
  return s;
}

bool PhotonDistribution::truncation_safe(double threshold) const noexcept {
  return p_.empty() || p_.back() < threshold;
}

std::string PhotonDistribution::to_csv() const {
  std::string out = "n,p\n";
  for (std::size_t n = 0; n < p_.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += format_shortest(p_[n]);
    out += '\n';
  }
  return out;
}

std::string PhotonDistribution::to_json() const {
  std::string out = "[";
  for (std::size_t n = 0; n < p_.size(); ++n) {
    if (n != 0) out += ',';
    out += format_shortest(p_[n]);
  }
  out += ']';
  return out;
}

PhotonDistribution PhotonDistribution::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "n,p") {
    throw Error(ErrorKind::InvalidArgument, "distribution CSV must start with header 'n,p'");
  }
  std::vector<double> p;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "malformed distribution row: '" + line + "'");
    }
    const auto n = static_cast<std::size_t>(std::stoul(line.substr(0, comma)));
    if (n != p.size()) {
      throw Error(ErrorKind::InvalidArgument, "distribution rows must be consecutive from n=0");
    }
    p.push_back(parse_double(line.substr(comma + 1)));
  }
  return PhotonDistribution(std::move(p));
}

PhotonDistribution thermal_state(double n_bar, std::size_t n_max) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
    throw Error(ErrorKind::InvalidArgument, "thermal occupancy must be >= 0");
  }
  const double ratio = n_bar / (1.0 + n_bar);
  const double tail = std::pow(ratio, static_cast<double>(n_max + 1));
  if (tail >= kTailThreshold) {
    throw Error(ErrorKind::TruncationUnsafe,
                "thermal tail beyond n_max=" + std::to_string(n_max) + " is " +
                    format_shortest(tail));
  }
  std::vector<double> p(n_max + 1);
  double term = 1.0 / (1.0 + n_bar);
  for (auto& x : p) {
    x = term;
    term *= ratio;
  }
  return renormalize(PhotonDistribution(std::move(p)));
}

PhotonDistribution fock_state(std::size_t n, std::size_t n_max) {
  if (n > n_max) {
    throw Error(ErrorKind::InvalidArgument, "Fock level exceeds truncation");
  }
  std::vector<double> p(n_max + 1, 0.0);
  p[n] = 1.0;
  return PhotonDistribution(std::move(p), true);
}

FieldStatistics statistics(const PhotonDistribution& d) {
  FieldStatistics s;
  const auto p = d.probabilities();
  for (std::size_t n = 0; n < p.size(); ++n) s.mean_n += static_cast<double>(n) * p[n];
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double dn = static_cast<double>(n) - s.mean_n;
    s.var_n += dn * dn * p[n];
  }
  if (s.var_n < 0.0) s.var_n = 0.0;
  s.v = s.mean_n > 0.0 ? std::sqrt(s.var_n / s.mean_n) : 0.0;
  return s;
}

PhotonDistribution renormalize(const PhotonDistribution& d) {
  std::vector<double> p(d.probabilities().begin(), d.probabilities().end());
  double total = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (p[n] < -kEpsPos || !std::isfinite(p[n])) {
      throw Error(ErrorKind::DegenerateState,
                  "probability p[" + std::to_string(n) + "] = " + format_shortest(p[n]));
    }
    if (p[n] < 0.0) p[n] = 0.0;
    total += p[n];
  }
  if (!(total > 0.0)) {
    throw Error(ErrorKind::DegenerateState, "distribution has no positive mass");
  }
  if (total != 1.0) {
    for (auto& x : p) x /= total;
  }
  return PhotonDistribution(std::move(p), true);
}

void require_truncation_safe(const PhotonDistribution& d, const char* where, double threshold) {
  if (!d.truncation_safe(threshold)) {
    throw Error(ErrorKind::TruncationUnsafe,
                std::string(where) + ": tail mass p[" + std::to_string(d.n_max()) +
                    "] = " + format_shortest(d[d.n_max()]) + " exceeds " +
                    format_shortest(threshold));
  }
}

}  // namespace micromaser
