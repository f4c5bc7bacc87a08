#pragma once

#include <initializer_list>
#include <vector>

#include "syswork/rat_matrix.hpp"
#include "syswork/smith.hpp"

namespace syswork {

inline RatMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  size_t r = rows.size(), c = r ? rows.begin()->size() : 0;
  RatMatrix m(r, c);
  size_t i = 0;
  for (auto& row : rows) {
    size_t j = 0;
    for (long v : row) m.at(i, j++) = Rat(v);
    ++i;
  }
  return m;
}

inline IntMatrix imat(std::initializer_list<std::initializer_list<long>> rows) {
  size_t r = rows.size(), c = r ? rows.begin()->size() : 0;
  IntMatrix m(r, c);
  size_t i = 0;
  for (auto& row : rows) {
    size_t j = 0;
    for (long v : row) m.at(i, j++) = Int(v);
    ++i;
  }
  return m;
}

inline RatVec vec(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}

inline IntVec ivec(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.push_back(Int(x));
  return v;
}

}  // namespace syswork
