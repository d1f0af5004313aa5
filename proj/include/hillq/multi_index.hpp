#ifndef HILLQ_MULTI_INDEX_HPP
#define HILLQ_MULTI_INDEX_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hillq {

/// Fourier mode ν = (m, n₁, n₂) ∈ Z^{A+2}: m pairs with the quasi-periodic
/// frequencies ω₁, n₁ with the base frequency ω₀ and n₂ with the proper
/// frequency Ω₀.
class MultiIndex {
 public:
  MultiIndex() : c_(2, 0) {}
  MultiIndex(std::vector<int> m, int n1, int n2);

  static MultiIndex zero(std::size_t A) { return MultiIndex(std::vector<int>(A, 0), 0, 0); }
  /// Index (0, n1, n2) in dimension A.
  static MultiIndex periodic(std::size_t A, int n1, int n2) {
    return MultiIndex(std::vector<int>(A, 0), n1, n2);
  }

  std::size_t A() const { return c_.size() - 2; }
  std::size_t dim() const { return c_.size(); }
  std::span<const int> m() const { return {c_.data(), c_.size() - 2}; }
  std::span<const int> components() const { return c_; }
  int n1() const { return c_[c_.size() - 2]; }
  int n2() const { return c_[c_.size() - 1]; }

  /// ℓ¹ norm Σ|m_i| + |n₁| + |n₂|.
  int l1() const;
  bool is_zero() const;

  MultiIndex operator-() const;
  MultiIndex operator+(const MultiIndex& other) const;

  /// Same mode in dimension A' (m padded with zeros). Requires A' ≥ A or the
  /// dropped entries to be zero.
  MultiIndex lifted(std::size_t A) const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

  /// "(m1,...,mA;n1;n2)"
  std::string str() const;
  /// "m1:...:mA:n1:n2", used in CSV output.
  std::string compact() const;

 private:
  std::vector<int> c_;
};

/// Calls fn(ν) for every ν ∈ Z^{A+2} with 0 < |ν| ≤ N, in a fixed
/// deterministic order.
void for_each_index(std::size_t A, int N, const std::function<void(const MultiIndex&)>& fn);

}  // namespace hillq

#endif  // HILLQ_MULTI_INDEX_HPP
