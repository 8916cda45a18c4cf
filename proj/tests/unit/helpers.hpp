#pragma once

#include <initializer_list>
#include <vector>

#include "spontaneous/core.hpp"

namespace testing {

inline spont::DataSet line(std::initializer_list<double> xs) {
  spont::Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double v : xs) m(i++, 0) = v;
  return spont::DataSet(m);
}

inline spont::DataSet rows(std::initializer_list<std::initializer_list<double>> xs) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto p = static_cast<Eigen::Index>(xs.begin()->size());
  spont::Matrix m(n, p);
  Eigen::Index i = 0;
  for (const auto& r : xs) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return spont::DataSet(m);
}

inline spont::Vector vec(std::initializer_list<double> xs) {
  spont::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline spont::Vector scalar(double v) { return spont::Vector::Constant(1, v); }

inline spont::Matrix eye(Eigen::Index p) { return spont::Matrix::Identity(p, p); }

}  // namespace testing
