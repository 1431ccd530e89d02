#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsg {

using Scalar = double;
using Index = Eigen::Index;

// Row-major everywhere so in-memory layout matches the on-disk layout.
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// A spectrum is just a grid of DCT coefficients; (0, 0) is the DC term.
using Spectrum = Mat;

// Per-location codeword indices at one scale.
using TokenMap = Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// IO and format failures; the CLI maps these to their own exit code.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Channel-last (h, w, c) stack of grids, one contiguous row-major block.
// The c values of a location are adjacent, so a per-location vector is
// stride-1 and the whole tensor flattens to an h x (w*c) matrix; both views
// are cheap Eigen maps.
class Tensor3 {
 public:
  using ChannelView = Eigen::Map<Mat, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
  using ConstChannelView =
      Eigen::Map<const Mat, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;

  Tensor3() = default;
  Tensor3(Index rows, Index cols, Index channels)
      : rows_(rows), cols_(cols), channels_(channels) {
    if (rows < 1 || cols < 1 || channels < 1)
      throw std::invalid_argument("Tensor3: dimensions must be positive");
    data_ = Vec::Zero(rows * cols * channels);
  }

  static Tensor3 constant(Index rows, Index cols, Index channels, Scalar value) {
    Tensor3 t(rows, cols, channels);
    t.data_.setConstant(value);
    return t;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index channels() const { return channels_; }
  Index size() const { return data_.size(); }
  bool empty() const { return data_.size() == 0; }

  Scalar operator()(Index i, Index j, Index c) const { return data_[offset(i, j, c)]; }
  Scalar& operator()(Index i, Index j, Index c) { return data_[offset(i, j, c)]; }

  const Scalar* data() const { return data_.data(); }
  Scalar* data() { return data_.data(); }

  Eigen::Map<Mat> flat() { return {data_.data(), rows_, cols_ * channels_}; }
  Eigen::Map<const Mat> flat() const { return {data_.data(), rows_, cols_ * channels_}; }

  Eigen::Map<Vec> asVector() { return {data_.data(), data_.size()}; }
  Eigen::Map<const Vec> asVector() const { return {data_.data(), data_.size()}; }

  ChannelView channel(Index c) {
    return {data_.data() + c, rows_, cols_,
            Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(cols_ * channels_, channels_)};
  }
  ConstChannelView channel(Index c) const {
    return {data_.data() + c, rows_, cols_,
            Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(cols_ * channels_, channels_)};
  }

  Mat channelCopy(Index c) const { return channel(c); }
  void setChannel(Index c, const Eigen::Ref<const Mat>& m) {
    if (m.rows() != rows_ || m.cols() != cols_)
      throw std::invalid_argument("Tensor3::setChannel: shape mismatch");
    channel(c) = m;
  }

  Eigen::Map<Vec> site(Index i, Index j) {
    return {data_.data() + (i * cols_ + j) * channels_, channels_};
  }
  Eigen::Map<const Vec> site(Index i, Index j) const {
    return {data_.data() + (i * cols_ + j) * channels_, channels_};
  }

  bool allFinite() const { return data_.allFinite(); }
  bool sameShape(const Tensor3& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && channels_ == o.channels_;
  }

  friend bool operator==(const Tensor3& a, const Tensor3& b) {
    return a.sameShape(b) && a.data_ == b.data_;
  }

 private:
  Index offset(Index i, Index j, Index c) const { return (i * cols_ + j) * channels_ + c; }

  Index rows_ = 0;
  Index cols_ = 0;
  Index channels_ = 0;
  Vec data_;
};

inline void requireFinite(const Eigen::Ref<const Mat>& m, const char* who) {
  if (!m.allFinite()) throw std::domain_error(std::string(who) + ": non-finite input");
}

inline void requireFinite(const Tensor3& t, const char* who) {
  if (!t.allFinite()) throw std::domain_error(std::string(who) + ": non-finite input");
}

inline void requireSameShape(const Tensor3& a, const Tensor3& b, const char* who) {
  if (!a.sameShape(b)) throw std::invalid_argument(std::string(who) + ": shape mismatch");
}

}  // namespace nsg
