#include "vertexsos/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vsos {

namespace {

void require_finite(const std::vector<cx>& v, const char* what) {
  for (const cx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw SchemaError(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace

ComplexTensor::ComplexTensor(std::vector<std::size_t> shape,
                             std::vector<cx> entries,
                             std::vector<std::string> labels)
    : shape_(std::move(shape)), entries_(std::move(entries)), labels_(std::move(labels)) {
  std::size_t n = 1;
  for (std::size_t s : shape_) {
    if (s == 0) throw DimensionMismatch("ComplexTensor: zero extent");
    n *= s;
  }
  if (n != entries_.size()) {
    throw DimensionMismatch("ComplexTensor: entry count does not match shape");
  }
  if (!labels_.empty() && labels_.size() != shape_.size()) {
    throw DimensionMismatch("ComplexTensor: label count does not match rank");
  }
  require_finite(entries_, "ComplexTensor");
}

const cx& ComplexTensor::at(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape_.size()) throw DimensionMismatch("ComplexTensor::at rank");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= shape_[k]) throw DimensionMismatch("ComplexTensor::at index");
    flat = flat * shape_[k] + idx[k];
  }
  return entries_[flat];
}

ComplexTensor ComplexTensor::permute_factors(const std::vector<std::size_t>& perm) const {
  const std::size_t r = shape_.size();
  if (perm.size() != r) throw DimensionMismatch("permute_factors: rank mismatch");
  std::vector<bool> seen(r, false);
  for (std::size_t p : perm) {
    if (p >= r || seen[p]) throw DimensionMismatch("permute_factors: not a permutation");
    seen[p] = true;
  }
  std::vector<std::size_t> new_shape(r);
  for (std::size_t i = 0; i < r; ++i) new_shape[perm[i]] = shape_[i];

  std::vector<std::size_t> new_stride(r, 1);
  for (std::size_t i = r; i-- > 1;) new_stride[i - 1] = new_stride[i] * new_shape[i];

  std::vector<cx> out(entries_.size());
  std::vector<std::size_t> idx(r, 0);
  for (std::size_t flat = 0; flat < entries_.size(); ++flat) {
    std::size_t dst = 0;
    for (std::size_t i = 0; i < r; ++i) dst += idx[i] * new_stride[perm[i]];
    out[dst] = entries_[flat];
    for (std::size_t i = r; i-- > 0;) {
      if (++idx[i] < shape_[i]) break;
      idx[i] = 0;
    }
  }
  std::vector<std::string> new_labels;
  if (!labels_.empty()) {
    new_labels.resize(r);
    for (std::size_t i = 0; i < r; ++i) new_labels[perm[i]] = labels_[i];
  }
  return ComplexTensor(std::move(new_shape), std::move(out), std::move(new_labels));
}

double ComplexTensor::frobenius_norm() const {
  double s = 0;
  for (const cx& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

SquareOperator::SquareOperator(std::size_t dim) : dim_(dim), a_(dim * dim, cx(0, 0)) {
  if (dim == 0) throw DimensionMismatch("SquareOperator: zero dimension");
}

SquareOperator::SquareOperator(std::size_t dim, std::vector<cx> entries)
    : dim_(dim), a_(std::move(entries)) {
  if (dim == 0) throw DimensionMismatch("SquareOperator: zero dimension");
  if (a_.size() != dim * dim) throw DimensionMismatch("SquareOperator: entry count");
  require_finite(a_, "SquareOperator");
}

SquareOperator SquareOperator::identity(std::size_t dim) {
  SquareOperator m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = cx(1, 0);
  return m;
}

SquareOperator SquareOperator::diagonal(const std::vector<cx>& d) {
  SquareOperator m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

SquareOperator SquareOperator::operator+(const SquareOperator& o) const {
  if (dim_ != o.dim_) throw DimensionMismatch("operator+: dims differ");
  SquareOperator m(dim_);
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
  return m;
}

SquareOperator SquareOperator::operator-(const SquareOperator& o) const {
  if (dim_ != o.dim_) throw DimensionMismatch("operator-: dims differ");
  SquareOperator m(dim_);
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
  return m;
}

SquareOperator SquareOperator::operator*(const SquareOperator& o) const {
  if (dim_ != o.dim_) throw DimensionMismatch("operator*: dims differ");
  SquareOperator m(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const cx aik = a_[i * dim_ + k];
      if (aik == cx(0, 0)) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        m.a_[i * dim_ + j] += aik * o.a_[k * dim_ + j];
      }
    }
  }
  return m;
}

SquareOperator SquareOperator::scaled(cx s) const {
  SquareOperator m(dim_);
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
  return m;
}

std::vector<cx> SquareOperator::apply(const std::vector<cx>& v) const {
  if (v.size() != dim_) throw DimensionMismatch("apply: vector size");
  std::vector<cx> out(dim_, cx(0, 0));
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out[i] += a_[i * dim_ + j] * v[j];
  }
  return out;
}

cx SquareOperator::trace() const {
  cx t(0, 0);
  for (std::size_t i = 0; i < dim_; ++i) t += a_[i * dim_ + i];
  return t;
}

double SquareOperator::frobenius_norm() const {
  double s = 0;
  for (const cx& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double SquareOperator::max_abs() const {
  double m = 0;
  for (const cx& z : a_) m = std::max(m, std::abs(z));
  return m;
}

SquareOperator SquareOperator::inverse() const {
  const std::size_t n = dim_;
  const double pivot_floor = 1e-13 * frobenius_norm();
  std::vector<cx> lu = a_;
  SquareOperator inv = identity(n);
  // Gauss-Jordan with partial pivoting on the augmented system.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(lu[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::abs(lu[r * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= pivot_floor) {
      throw SingularMatrix("inverse: pivot magnitude " + std::to_string(best) +
                           " below threshold at column " + std::to_string(col));
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu[col * n + j], lu[piv * n + j]);
        std::swap(inv(col, j), inv(piv, j));
      }
    }
    const cx d = lu[col * n + col];
    for (std::size_t j = 0; j < n; ++j) {
      lu[col * n + j] /= d;
      inv(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const cx f = lu[r * n + col];
      if (f == cx(0, 0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        lu[r * n + j] -= f * lu[col * n + j];
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

double SquareOperator::condition_estimate() const {
  try {
    return frobenius_norm() * inverse().frobenius_norm();
  } catch (const SingularMatrix&) {
    return std::numeric_limits<double>::infinity();
  }
}

SquareOperator SquareOperator::expm() const {
  const double nrm = frobenius_norm();
  int s = 0;
  if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const double scale = std::ldexp(1.0, -s);
  const SquareOperator x = scaled(cx(scale, 0));

  SquareOperator sum = identity(dim_);
  SquareOperator term = identity(dim_);
  for (int k = 1; k <= 64; ++k) {
    term = (term * x).scaled(cx(1.0 / k, 0));
    sum = sum + term;
    if (term.frobenius_norm() <= 1e-16 * std::max(1.0, sum.frobenius_norm())) break;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

bool SquareOperator::approx_equal(const SquareOperator& o, double tol) const {
  if (dim_ != o.dim_) return false;
  return (*this - o).frobenius_norm() <= tol;
}

SquareOperator kron(const SquareOperator& a, const SquareOperator& b) {
  const std::size_t da = a.dim(), db = b.dim();
  SquareOperator m(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cx aij = a(i, j);
      if (aij == cx(0, 0)) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l)
          m(i * db + k, j * db + l) = aij * b(k, l);
    }
  return m;
}

std::vector<cx> kron_vec(const std::vector<cx>& a, const std::vector<cx>& b) {
  std::vector<cx> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

SquareOperator permute_factors(const SquareOperator& op,
                               const std::vector<std::size_t>& factor_dims,
                               const std::vector<std::size_t>& perm) {
  std::size_t total = 1;
  for (std::size_t d : factor_dims) total *= d;
  if (total != op.dim()) {
    throw DimensionMismatch("permute_factors: factor dims do not match operator");
  }
  const std::size_t r = factor_dims.size();
  if (perm.size() != r) throw DimensionMismatch("permute_factors: perm rank");

  std::vector<std::size_t> new_dims(r);
  for (std::size_t i = 0; i < r; ++i) new_dims[perm[i]] = factor_dims[i];
  std::vector<std::size_t> new_stride(r, 1);
  for (std::size_t i = r; i-- > 1;) new_stride[i - 1] = new_stride[i] * new_dims[i];

  // Maps a flat index in the original ordering to the permuted ordering.
  auto relocate = [&](std::size_t flat) {
    std::vector<std::size_t> idx(r);
    for (std::size_t i = r; i-- > 0;) {
      idx[i] = flat % factor_dims[i];
      flat /= factor_dims[i];
    }
    std::size_t dst = 0;
    for (std::size_t i = 0; i < r; ++i) dst += idx[i] * new_stride[perm[i]];
    return dst;
  };

  std::vector<std::size_t> map(total);
  for (std::size_t f = 0; f < total; ++f) map[f] = relocate(f);

  SquareOperator out(op.dim());
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) out(map[i], map[j]) = op(i, j);
  return out;
}

SquareOperator embed_two_site(const SquareOperator& r, std::size_t d,
                              std::size_t n_sites, std::size_t site) {
  if (r.dim() != d * d) throw DimensionMismatch("embed_two_site: operator is not two-site");
  if (site + 1 >= n_sites) throw DimensionMismatch("embed_two_site: site out of range");
  std::size_t left = 1, right = 1;
  for (std::size_t k = 0; k < site; ++k) left *= d;
  for (std::size_t k = site + 2; k < n_sites; ++k) right *= d;
  return kron(kron(SquareOperator::identity(left), r), SquareOperator::identity(right));
}

SquareOperator embed_pair(const SquareOperator& r, std::size_t d,
                          std::size_t n_sites, std::size_t site_a,
                          std::size_t site_b) {
  if (site_a >= site_b || site_b >= n_sites) {
    throw DimensionMismatch("embed_pair: bad site pair");
  }
  if (site_b == site_a + 1) return embed_two_site(r, d, n_sites, site_a);
  // Embed on the adjacent pair (site_a, site_a+1), then relocate the second
  // leg out to site_b: factor site_a+1 -> position site_b, the factors in
  // between shift left by one.
  std::vector<std::size_t> dims(n_sites, d);
  std::vector<std::size_t> perm(n_sites);
  for (std::size_t i = 0; i < n_sites; ++i) perm[i] = i;
  perm[site_a + 1] = site_b;
  for (std::size_t i = site_a + 2; i <= site_b; ++i) perm[i] = i - 1;
  return permute_factors(embed_two_site(r, d, n_sites, site_a), dims, perm);
}

}  // namespace vsos
