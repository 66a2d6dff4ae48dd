#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace qroute {

using Scalar = double;

// Node identifier as it appears in topology documents: a positive integer.
// Fixtures number nodes 1..N but ids only need to be unique, not contiguous;
// dense matrix indexing goes through Topology::index_of.
using NodeId = int;

template <typename S>
using DenseMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using Matrix = DenseMatrix<Scalar>;
using CountMatrix = DenseMatrix<std::int64_t>;

}  // namespace qroute
