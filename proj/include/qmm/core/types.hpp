#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace qmm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Vertex label of the interaction graph. Ordered by integer value.
enum class SiteId : std::int32_t {};

constexpr std::int32_t to_int(SiteId s) { return static_cast<std::int32_t>(s); }

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands claim the same site, or supports do not match.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// A site set lies outside the operand's support or overlaps where it must not.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix fails the density-operator invariants.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// A geometry, layout or marginal string that cannot be used as requested.
class LayoutError : public Error {
 public:
  using Error::Error;
};

class StringError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// SiteSet

/// Sorted, duplicate-free set of sites.
class SiteSet {
 public:
  SiteSet() = default;
  SiteSet(std::initializer_list<int> ids) {
    for (int id : ids) sites_.push_back(SiteId{id});
    normalize();
  }
  explicit SiteSet(std::vector<SiteId> sites) : sites_(std::move(sites)) { normalize(); }

  static SiteSet range(int first, int last) {
    std::vector<SiteId> v;
    for (int i = first; i <= last; ++i) v.push_back(SiteId{i});
    return SiteSet(std::move(v));
  }

  [[nodiscard]] bool empty() const { return sites_.empty(); }
  [[nodiscard]] std::size_t size() const { return sites_.size(); }
  [[nodiscard]] auto begin() const { return sites_.begin(); }
  [[nodiscard]] auto end() const { return sites_.end(); }
  [[nodiscard]] const std::vector<SiteId>& ids() const { return sites_; }
  [[nodiscard]] SiteId operator[](std::size_t i) const { return sites_[i]; }

  [[nodiscard]] bool contains(SiteId s) const {
    return std::binary_search(sites_.begin(), sites_.end(), s);
  }
  [[nodiscard]] bool includes(const SiteSet& other) const {
    return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end());
  }
  [[nodiscard]] bool disjoint(const SiteSet& other) const { return (*this & other).empty(); }

  friend SiteSet operator|(const SiteSet& a, const SiteSet& b) {
    std::vector<SiteId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return SiteSet::from_sorted(std::move(out));
  }
  friend SiteSet operator&(const SiteSet& a, const SiteSet& b) {
    std::vector<SiteId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return SiteSet::from_sorted(std::move(out));
  }
  friend SiteSet operator-(const SiteSet& a, const SiteSet& b) {
    std::vector<SiteId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return SiteSet::from_sorted(std::move(out));
  }
  friend bool operator==(const SiteSet&, const SiteSet&) = default;
  friend auto operator<=>(const SiteSet&, const SiteSet&) = default;

 private:
  static SiteSet from_sorted(std::vector<SiteId> v) {
    SiteSet s;
    s.sites_ = std::move(v);
    return s;
  }
  void normalize() {
    std::sort(sites_.begin(), sites_.end());
    sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  }

  std::vector<SiteId> sites_;
};

inline std::string to_string(const SiteSet& s) {
  std::vector<int> v;
  for (SiteId id : s) v.push_back(to_int(id));
  return fmt::format("{{{}}}", fmt::join(v, ","));
}

}  // namespace qmm
