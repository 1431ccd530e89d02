#include "nsg/codec.hpp"

#include <charconv>

#include "nsg/rng.hpp"

namespace nsg::codec {

Codebook::Codebook(Mat vectors) : vectors_(std::move(vectors)) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1)
    throw std::invalid_argument("Codebook: needs at least one codeword and one dimension");
  requireFinite(vectors_, "Codebook");
  if (!vectors_.row(0).isZero(0.0))
    throw std::invalid_argument("Codebook: codeword 0 must be the zero vector");
}

Codebook Codebook::gaussian(Index words, Index dim, std::uint64_t seed) {
  if (words < 1 || dim < 1)
    throw std::invalid_argument("Codebook::gaussian: words and dim must be positive");
  Mat v(words, dim);
  rng::Stream rs(rng::combine(seed, 0x636f6465));
  for (Index i = 0; i < words; ++i)
    for (Index j = 0; j < dim; ++j) v(i, j) = rs.normal();
  v.row(0).setZero();
  return Codebook(std::move(v));
}

ScaleLadder ScaleLadder::parse(const std::string& text) {
  ScaleLadder ladder;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t x = item.find('x');
    long h = 0, w = 0;
    bool ok = x != std::string::npos;
    if (ok) {
      auto rh = std::from_chars(item.data(), item.data() + x, h);
      auto rw = std::from_chars(item.data() + x + 1, item.data() + item.size(), w);
      ok = rh.ec == std::errc() && rh.ptr == item.data() + x && rw.ec == std::errc() &&
           rw.ptr == item.data() + item.size() && h > 0 && w > 0;
    }
    if (!ok) throw std::invalid_argument("ScaleLadder: bad entry '" + item + "'");
    ladder.sizes.emplace_back(h, w);
    pos = comma + 1;
  }
  return ladder;
}

std::string ScaleLadder::str() const {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sizes[i].first) + "x" + std::to_string(sizes[i].second);
  }
  return out;
}

void ScaleLadder::validateFor(Index h, Index w) const {
  if (sizes.empty()) throw std::invalid_argument("ScaleLadder: empty ladder");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i].first < 1 || sizes[i].second < 1)
      throw std::invalid_argument("ScaleLadder: sizes must be positive");
    if (i > 0 && (sizes[i].first < sizes[i - 1].first ||
                  sizes[i].second < sizes[i - 1].second))
      throw std::invalid_argument("ScaleLadder: sizes must be non-decreasing");
  }
  if (sizes.back().first != h || sizes.back().second != w)
    throw std::invalid_argument("ScaleLadder: final scale must match the field size");
}

TokenMap quantizeNearest(const Tensor3& field, const Codebook& cb) {
  if (field.channels() != cb.dim())
    throw std::invalid_argument("quantizeNearest: channel count != codebook dim");
  requireFinite(field, "quantizeNearest");
  TokenMap tokens(field.rows(), field.cols());
  const Mat& words = cb.vectors();
  for (Index i = 0; i < field.rows(); ++i)
    for (Index j = 0; j < field.cols(); ++j) {
      const auto site = field.site(i, j);
      Index best = 0;
      Scalar best_d = (site.transpose() - words.row(0)).squaredNorm();
      for (Index v = 1; v < words.rows(); ++v) {
        const Scalar d = (site.transpose() - words.row(v)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = v;
        }
      }
      tokens(i, j) = static_cast<std::uint32_t>(best);
    }
  return tokens;
}

Tensor3 dequantize(const TokenMap& tokens, const Codebook& cb) {
  if (tokens.rows() < 1 || tokens.cols() < 1)
    throw std::invalid_argument("dequantize: empty token map");
  Tensor3 out(tokens.rows(), tokens.cols(), cb.dim());
  for (Index i = 0; i < tokens.rows(); ++i)
    for (Index j = 0; j < tokens.cols(); ++j) {
      const std::uint32_t v = tokens(i, j);
      if (v >= static_cast<std::uint32_t>(cb.words()))
        throw std::domain_error("dequantize: token index " + std::to_string(v) +
                                " out of range for " + std::to_string(cb.words()) +
                                " codewords");
      out.site(i, j) = cb.vectors().row(v).transpose();
    }
  return out;
}

Encoding encodeMultiscaleTraced(const Tensor3& f, const ScaleLadder& ladder,
                                const Codebook& cb, resample::Kind up_kind) {
  ladder.validateFor(f.rows(), f.cols());
  if (f.channels() != cb.dim())
    throw std::invalid_argument("encodeMultiscale: channel count != codebook dim");
  requireFinite(f, "encodeMultiscale");
  Encoding enc;
  Tensor3 fhat(f.rows(), f.cols(), f.channels());
  Tensor3 residual(f.rows(), f.cols(), f.channels());
  for (const auto& [hk, wk] : ladder.sizes) {
    residual.asVector() = f.asVector() - fhat.asVector();
    const Tensor3 coarse = resample::downsampleArea(residual, hk, wk);
    TokenMap tokens = quantizeNearest(coarse, cb);
    const Tensor3 quantized = dequantize(tokens, cb);
    fhat.asVector() +=
        resample::interpolate(quantized, f.rows(), f.cols(), up_kind).asVector();
    enc.tokens.push_back(std::move(tokens));
    enc.mse.push_back((f.asVector() - fhat.asVector()).squaredNorm() /
                      static_cast<Scalar>(f.size()));
  }
  enc.reconstruction = std::move(fhat);
  return enc;
}

std::vector<TokenMap> encodeMultiscale(const Tensor3& f, const ScaleLadder& ladder,
                                       const Codebook& cb, resample::Kind up_kind) {
  return encodeMultiscaleTraced(f, ladder, cb, up_kind).tokens;
}

Tensor3 reconstruct(const std::vector<TokenMap>& tokens, const ScaleLadder& ladder,
                    const Codebook& cb, resample::Kind up_kind) {
  if (tokens.size() != ladder.sizes.size())
    throw std::invalid_argument("reconstruct: token map count != ladder length");
  const auto [h, w] = ladder.sizes.back();
  ladder.validateFor(h, w);
  Tensor3 fhat(h, w, cb.dim());
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k].rows() != ladder.sizes[k].first ||
        tokens[k].cols() != ladder.sizes[k].second)
      throw std::invalid_argument("reconstruct: token map shape mismatch at scale " +
                                  std::to_string(k + 1));
    fhat.asVector() +=
        resample::interpolate(dequantize(tokens[k], cb), h, w, up_kind).asVector();
  }
  return fhat;
}

}  // namespace nsg::codec
