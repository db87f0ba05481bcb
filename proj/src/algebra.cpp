#include "spectra/algebra.hpp"

#include "spectra/error.hpp"

namespace spectra {

CategoryAlgebra::CategoryAlgebra(const CategoryDatum& d) : d_(&d) {
  const std::size_t n = d.point_count();
  offsets_.resize(n * n);
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y) {
      offsets_[x * n + y] = dim_;
      dim_ += d.hom_dim(x, y);
    }
}

Vector CategoryAlgebra::embed(PointIndex x, PointIndex y, const Vector& h) const {
  Vector u = zero_vector(d_->field(), dim_);
  const std::size_t off = offset(x, y);
  for (std::size_t k = 0; k < h.size(); ++k) u[off + k] = h[k];
  return u;
}

Vector CategoryAlgebra::block(const Vector& u, PointIndex x, PointIndex y) const {
  const std::size_t off = offset(x, y);
  return Vector(u.begin() + static_cast<std::ptrdiff_t>(off),
                u.begin() + static_cast<std::ptrdiff_t>(off + d_->hom_dim(x, y)));
}

Vector CategoryAlgebra::idempotent(PointIndex x) const { return embed(x, x, d_->identity(x)); }

Vector CategoryAlgebra::unit() const {
  const Field& f = d_->field();
  Vector u = zero_vector(f, dim_);
  for (PointIndex x = 0; x < d_->point_count(); ++x) {
    const Vector e = idempotent(x);
    for (std::size_t k = 0; k < dim_; ++k) u[k] = f.add(u[k], e[k]);
  }
  return u;
}

Vector CategoryAlgebra::basis_element(std::size_t k) const {
  Vector u = zero_vector(d_->field(), dim_);
  u.at(k) = d_->field().one();
  return u;
}

Vector CategoryAlgebra::multiply(const Vector& u, const Vector& v) const {
  if (u.size() != dim_ || v.size() != dim_) throw InputError("algebra element has wrong dimension");
  const Field& f = d_->field();
  const std::size_t n = d_->point_count();
  Vector out = zero_vector(f, dim_);
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y) {
      const Vector vb = block(v, x, y);
      if (is_zero(vb)) continue;
      for (PointIndex z = 0; z < n; ++z) {
        const Vector ub = block(u, y, z);
        if (is_zero(ub)) continue;
        const Vector prod = d_->compose(x, y, z, ub, vb);
        const std::size_t off = offset(x, z);
        for (std::size_t k = 0; k < prod.size(); ++k) out[off + k] = f.add(out[off + k], prod[k]);
      }
    }
  return out;
}

CategoryAlgebra build_algebra(const CategoryDatum& d) { return CategoryAlgebra(d); }

std::size_t BlockIdeal::dim() const {
  std::size_t s = 0;
  for (const auto& b : blocks) s += b.size();
  return s;
}

bool BlockIdeal::contains_identity(const CategoryDatum& d, PointIndex y) const {
  SubspaceBuilder sb(d.field(), d.hom_dim(y, y));
  for (const auto& v : at(y, y)) sb.insert(v);
  return sb.contains(d.identity(y));
}

std::vector<Vector> BlockIdeal::global_basis(const CategoryAlgebra& alg) const {
  std::vector<Vector> out;
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y)
      for (const auto& v : at(x, y)) out.push_back(alg.embed(x, y, v));
  return out;
}

BlockIdeal idempotent_ideal(const CategoryDatum& d, const PointSet& pts) {
  const std::size_t n = d.point_count();
  if (pts.size() != n) throw InputError("point set does not match datum");
  std::vector<SubspaceBuilder> blocks;
  blocks.reserve(n * n);
  for (PointIndex x = 0; x < n; ++x)
    for (PointIndex y = 0; y < n; ++y) blocks.emplace_back(d.field(), d.hom_dim(x, y));
  for (PointIndex x = 0; x < n; ++x)
    if (pts.test(x)) blocks[x * n + x].insert(d.identity(x));

  bool changed = true;
  while (changed) {
    changed = false;
    for (PointIndex w = 0; w < n; ++w)
      for (PointIndex x = 0; x < n; ++x) {
        const auto gens = blocks[w * n + x].basis();
        if (gens.empty()) continue;
        for (PointIndex y = 0; y < n; ++y) {
          // left: b o j for b in hom(x,y); right: j o a for a in hom(y,w)
          for (std::size_t b = 0; b < d.hom_dim(x, y); ++b)
            for (const auto& j : gens) changed |= blocks[w * n + y].insert(d.compose(w, x, y, d.basis_vector(x, y, b), j));
          for (std::size_t a = 0; a < d.hom_dim(y, w); ++a)
            for (const auto& j : gens) changed |= blocks[y * n + x].insert(d.compose(y, w, x, j, d.basis_vector(y, w, a)));
        }
      }
  }
  BlockIdeal out{n, {}};
  for (auto& b : blocks) out.blocks.push_back(b.basis());
  return out;
}

std::vector<Vector> idempotent_ideal(const CategoryAlgebra& alg, const PointSet& pts) {
  return idempotent_ideal(alg.datum(), pts).global_basis(alg);
}

}  // namespace spectra
