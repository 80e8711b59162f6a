#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ggbm {

// Dense numeric containers used throughout; scalar-templated so test code can
// instantiate float variants where precision does not matter.
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VecD = Vec<double>;
using MatD = Mat<double>;

// Missing values are tracked out of band: a cell is missing iff the mask is
// nonzero, the value slot is then unspecified.
using MaskVec = Vec<std::uint8_t>;
using MaskMat = Mat<std::uint8_t>;

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

// Input or configuration violation; the CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

// Deterministic child-stream seeds from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t master, const std::string& tag);

// Shortest round-trip decimal form, used for all CSV/JSON number output so
// artifacts are byte-stable.
std::string format_double(double v);

}  // namespace ggbm
