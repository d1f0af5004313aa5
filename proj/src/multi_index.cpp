#include "hillq/multi_index.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace hillq {

MultiIndex::MultiIndex(std::vector<int> m, int n1, int n2) : c_(std::move(m)) {
  c_.push_back(n1);
  c_.push_back(n2);
}

int MultiIndex::l1() const {
  int s = 0;
  for (int v : c_) s += std::abs(v);
  return s;
}

bool MultiIndex::is_zero() const {
  for (int v : c_)
    if (v != 0) return false;
  return true;
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex r = *this;
  for (int& v : r.c_) v = -v;
  return r;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.c_.size() != c_.size()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  MultiIndex r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += other.c_[i];
  return r;
}

MultiIndex MultiIndex::lifted(std::size_t A) const {
  std::vector<int> m(A, 0);
  const auto mine = this->m();
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (i < A)
      m[i] = mine[i];
    else if (mine[i] != 0)
      throw std::invalid_argument("MultiIndex::lifted: would drop a nonzero mode");
  }
  return MultiIndex(std::move(m), n1(), n2());
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  const auto mm = m();
  for (std::size_t i = 0; i < mm.size(); ++i) os << (i ? "," : "") << mm[i];
  os << ';' << n1() << ';' << n2() << ')';
  return os.str();
}

std::string MultiIndex::compact() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ":" : "") << c_[i];
  return os.str();
}

namespace {

void enumerate(std::vector<int>& c, std::size_t pos, int budget,
               const std::function<void(const MultiIndex&)>& fn) {
  if (pos + 1 == c.size()) {
    for (int v = -budget; v <= budget; ++v) {
      c[pos] = v;
      bool nonzero = false;
      for (int x : c) nonzero = nonzero || x != 0;
      if (!nonzero) continue;
      std::vector<int> m(c.begin(), c.end() - 2);
      fn(MultiIndex(std::move(m), c[c.size() - 2], c[c.size() - 1]));
    }
    return;
  }
  for (int v = -budget; v <= budget; ++v) {
    c[pos] = v;
    enumerate(c, pos + 1, budget - std::abs(v), fn);
  }
}

}  // namespace

void for_each_index(std::size_t A, int N, const std::function<void(const MultiIndex&)>& fn) {
  if (N < 1) return;
  std::vector<int> c(A + 2, 0);
  enumerate(c, 0, N, fn);
}

}  // namespace hillq
