#include "qsot/kernels.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qsot::kernels {

namespace {

struct Decoded {
    std::size_t block, row, col;
};

std::vector<Decoded> decode_table(const AlgebraShape& s) {
    std::vector<Decoded> t;
    t.reserve(s.total_dim());
    for (std::size_t b = 0; b < s.num_blocks(); ++b)
        for (std::size_t r = 0; r < s.block(b); ++r)
            for (std::size_t c = 0; c < s.block(b); ++c) t.push_back({b, r, c});
    return t;
}

std::vector<AlgebraShape> kept_factors(std::span<const AlgebraShape> factors,
                                       std::span<const std::size_t> keep) {
    std::vector<AlgebraShape> out;
    for (std::size_t k : keep) out.push_back(factors[k]);
    return out;
}

std::vector<bool> kept_mask(std::size_t arity, std::span<const std::size_t> keep) {
    std::vector<bool> mask(arity, false);
    for (std::size_t k : keep) {
        if (k >= arity) throw std::out_of_range("partial_trace: factor index out of range");
        mask[k] = true;
    }
    return mask;
}

void check_bloom_args(const Matrix& map, const AlgebraShape& target, const AlgebraElement& x) {
    if (static_cast<std::size_t>(map.rows()) != target.total_dim() ||
        static_cast<std::size_t>(map.cols()) != x.shape().total_dim())
        throw std::invalid_argument("bloom: map matrix does not match source/target shapes");
}

struct FactorApplyPlan {
    std::vector<std::size_t> perm_in, perm_out;
    std::size_t left = 1, right = 1, dim_in = 0, dim_out = 0;
};

FactorApplyPlan plan_factor_apply(std::span<const AlgebraShape> factors, const Vector& x, std::size_t k,
                                  const Matrix& map, const AlgebraShape& new_factor) {
    if (k >= factors.size()) throw std::out_of_range("factor_apply: factor index out of range");
    if (static_cast<std::size_t>(map.cols()) != factors[k].total_dim() ||
        static_cast<std::size_t>(map.rows()) != new_factor.total_dim())
        throw std::invalid_argument("factor_apply: map does not match factor shapes");
    FactorApplyPlan p;
    p.perm_in = kron_to_flat(factors);
    if (static_cast<std::size_t>(x.size()) != p.perm_in.size())
        throw std::invalid_argument("factor_apply: coordinate vector has wrong length");
    std::vector<AlgebraShape> out(factors.begin(), factors.end());
    out[k] = new_factor;
    p.perm_out = kron_to_flat(out);
    for (std::size_t j = 0; j < k; ++j) p.left *= factors[j].total_dim();
    for (std::size_t j = k + 1; j < factors.size(); ++j) p.right *= factors[j].total_dim();
    p.dim_in = factors[k].total_dim();
    p.dim_out = new_factor.total_dim();
    return p;
}

}  // namespace

std::vector<std::size_t> kron_to_flat(std::span<const AlgebraShape> factors) {
    const std::size_t arity = factors.size();
    if (arity == 0) throw std::invalid_argument("kron_to_flat: empty factor list");
    const AlgebraShape flat = flatten(factors);
    std::vector<std::vector<Decoded>> tables;
    std::size_t total = 1;
    for (const auto& f : factors) {
        tables.push_back(decode_table(f));
        total *= f.total_dim();
    }
    std::vector<std::size_t> perm(total);
    std::vector<std::size_t> digit(arity, 0);
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t fb = 0, n = 1, row = 0, col = 0;
        for (std::size_t j = 0; j < arity; ++j) {
            const Decoded& d = tables[j][digit[j]];
            const std::size_t nj = factors[j].block(d.block);
            fb = fb * factors[j].num_blocks() + d.block;
            row = row * nj + d.row;
            col = col * nj + d.col;
            n *= nj;
        }
        perm[k] = flat.offset(fb) + row * n + col;
        for (std::size_t j = arity; j-- > 0;) {
            if (++digit[j] < factors[j].total_dim()) break;
            digit[j] = 0;
        }
    }
    return perm;
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// ---------------------------------------------------------------------------
// serial reference

namespace serial {

AlgebraElement bloom(const Matrix& map, const AlgebraShape& target, const AlgebraElement& x) {
    check_bloom_args(map, target, x);
    const AlgebraShape& src = x.shape();
    std::vector<Matrix> blocks;
    for (std::size_t b = 0; b < src.num_blocks(); ++b) {
        const std::size_t n = src.block(b);
        const Matrix& X = x.block(b);
        for (std::size_t c = 0; c < target.num_blocks(); ++c) {
            const std::size_t m = target.block(c);
            Matrix out = Matrix::Zero(n * m, n * m);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t r = 0; r < m; ++r)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t s = 0; s < m; ++s) {
                            const auto row = static_cast<Eigen::Index>(target.coord(c, r, s));
                            cplx v = 0.0;
                            // mu^*(X) = sum X_il e_ij (x) e_jl
                            for (std::size_t l = 0; l < n; ++l)
                                v += X(i, l) * map(row, static_cast<Eigen::Index>(src.coord(b, j, l)));
                            // mu~^*(X) = sum X_kj e_ij (x) e_ki
                            for (std::size_t k = 0; k < n; ++k)
                                v += X(k, j) * map(row, static_cast<Eigen::Index>(src.coord(b, k, i)));
                            out(i * m + r, j * m + s) = 0.5 * v;
                        }
            blocks.push_back(std::move(out));
        }
    }
    return {tensor_shape(src, target), std::move(blocks)};
}

AlgebraElement partial_trace(std::span<const AlgebraShape> factors, const AlgebraElement& x,
                             std::span<const std::size_t> keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    const std::size_t arity = factors.size();
    const auto mask = kept_mask(arity, keep);
    const auto kept = kept_factors(factors, keep);
    BlockIndexer in_idx(factors), out_idx(kept);
    auto out = AlgebraElement::zero(flatten(kept));
    std::vector<Matrix> out_blocks = out.blocks();

    for (std::size_t fb = 0; fb < in_idx.size(); ++fb) {
        const auto tuple = in_idx.tuple(fb);
        std::vector<std::size_t> dims(arity), out_tuple;
        for (std::size_t j = 0; j < arity; ++j) {
            dims[j] = factors[j].block(tuple[j]);
            if (mask[j]) out_tuple.push_back(tuple[j]);
        }
        const Matrix& M = x.block(fb);
        Matrix& O = out_blocks[out_idx.flat(out_tuple)];
        const auto N = static_cast<std::size_t>(M.rows());
        std::vector<std::size_t> rd(arity), cd(arity);
        for (std::size_t R = 0; R < N; ++R) {
            for (std::size_t j = arity, t = R; j-- > 0;) {
                rd[j] = t % dims[j];
                t /= dims[j];
            }
            for (std::size_t C = 0; C < N; ++C) {
                for (std::size_t j = arity, t = C; j-- > 0;) {
                    cd[j] = t % dims[j];
                    t /= dims[j];
                }
                bool diagonal = true;
                std::size_t orow = 0, ocol = 0;
                for (std::size_t j = 0; j < arity; ++j) {
                    if (mask[j]) {
                        orow = orow * dims[j] + rd[j];
                        ocol = ocol * dims[j] + cd[j];
                    } else if (rd[j] != cd[j]) {
                        diagonal = false;
                        break;
                    }
                }
                if (diagonal)
                    O(static_cast<Eigen::Index>(orow), static_cast<Eigen::Index>(ocol)) +=
                        M(static_cast<Eigen::Index>(R), static_cast<Eigen::Index>(C));
            }
        }
    }
    return {out.shape(), std::move(out_blocks)};
}

Vector factor_apply(std::span<const AlgebraShape> factors, const Vector& x, std::size_t k,
                    const Matrix& map, const AlgebraShape& new_factor) {
    const auto p = plan_factor_apply(factors, x, k, map, new_factor);
    Vector y = Vector::Zero(static_cast<Eigen::Index>(p.perm_out.size()));
    for (std::size_t l = 0; l < p.left; ++l)
        for (std::size_t dp = 0; dp < p.dim_out; ++dp)
            for (std::size_t r = 0; r < p.right; ++r) {
                cplx acc = 0.0;
                for (std::size_t d = 0; d < p.dim_in; ++d)
                    acc += map(static_cast<Eigen::Index>(dp), static_cast<Eigen::Index>(d)) *
                           x(static_cast<Eigen::Index>(p.perm_in[(l * p.dim_in + d) * p.right + r]));
                y(static_cast<Eigen::Index>(p.perm_out[(l * p.dim_out + dp) * p.right + r])) = acc;
            }
    return y;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP

namespace parallel {

AlgebraElement bloom(const Matrix& map, const AlgebraShape& target, const AlgebraElement& x) {
    check_bloom_args(map, target, x);
    const AlgebraShape& src = x.shape();
    const AlgebraShape out_shape = tensor_shape(src, target);
    std::vector<Matrix> blocks;
    blocks.reserve(out_shape.num_blocks());
    for (std::size_t nb : out_shape.blocks()) blocks.emplace_back(nb, nb);

    const Eigen::Index rows = map.rows();
    using Strided = Eigen::Map<const Matrix, 0, Eigen::OuterStride<>>;

    for (std::size_t b = 0; b < src.num_blocks(); ++b) {
        const auto n = static_cast<Eigen::Index>(src.block(b));
        const Matrix& X = x.block(b);
        const auto off = static_cast<Eigen::Index>(src.offset(b));

        // first[j].col(i) = (id (x) E) contribution of mu^* at (i, j)
        std::vector<Matrix> first(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < n; ++j)
            first[static_cast<std::size_t>(j)] = map.middleCols(off + j * n, n) * X.transpose();

#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i) {
            // columns (b, k, i) for k = 0..n-1 are n apart
            Strided cols(map.data() + (off + i) * rows, rows, n, Eigen::OuterStride<>(n * rows));
            const Matrix second = cols * X;
            for (Eigen::Index j = 0; j < n; ++j) {
                const Vector v = 0.5 * (first[static_cast<std::size_t>(j)].col(i) + second.col(j));
                for (std::size_t c = 0; c < target.num_blocks(); ++c) {
                    const auto m = static_cast<Eigen::Index>(target.block(c));
                    const auto toff = static_cast<Eigen::Index>(target.offset(c));
                    Matrix& out = blocks[b * target.num_blocks() + c];
                    for (Eigen::Index r = 0; r < m; ++r)
                        for (Eigen::Index s = 0; s < m; ++s) out(i * m + r, j * m + s) = v(toff + r * m + s);
                }
            }
        }
    }
    return {out_shape, std::move(blocks)};
}

AlgebraElement partial_trace(std::span<const AlgebraShape> factors, const AlgebraElement& x,
                             std::span<const std::size_t> keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    const std::size_t arity = factors.size();
    const auto mask = kept_mask(arity, keep);
    const auto kept = kept_factors(factors, keep);
    std::vector<AlgebraShape> traced;
    for (std::size_t j = 0; j < arity; ++j)
        if (!mask[j]) traced.push_back(factors[j]);
    BlockIndexer in_idx(factors), out_idx(kept), traced_idx(traced);
    const AlgebraShape out_shape = flatten(kept);
    std::vector<Matrix> out_blocks;
    for (std::size_t nb : out_shape.blocks()) out_blocks.push_back(Matrix::Zero(nb, nb));

    for (std::size_t ob = 0; ob < out_idx.size(); ++ob) {
        const auto ot = out_idx.tuple(ob);
        Matrix& O = out_blocks[ob];
        for (std::size_t tb = 0; tb < traced_idx.size(); ++tb) {
            const auto tt = traced_idx.tuple(tb);
            std::vector<std::size_t> tuple(arity), dims(arity), stride(arity);
            for (std::size_t j = 0, a = 0, t = 0; j < arity; ++j) {
                tuple[j] = mask[j] ? ot[a++] : tt[t++];
                dims[j] = factors[j].block(tuple[j]);
            }
            for (std::size_t j = arity, s = 1; j-- > 0;) {
                stride[j] = s;
                s *= dims[j];
            }
            // row offsets contributed by kept digits and by traced digits
            std::vector<std::size_t> kept_off{0}, traced_off{0};
            for (std::size_t j = 0; j < arity; ++j) {
                auto& target = mask[j] ? kept_off : traced_off;
                std::vector<std::size_t> next;
                next.reserve(target.size() * dims[j]);
                for (std::size_t base : target)
                    for (std::size_t d = 0; d < dims[j]; ++d) next.push_back(base + d * stride[j]);
                target = std::move(next);
            }
            const Matrix& M = x.block(in_idx.flat(tuple));
            const auto nk = static_cast<Eigen::Index>(kept_off.size());
#pragma omp parallel for schedule(static)
            for (Eigen::Index rk = 0; rk < nk; ++rk)
                for (Eigen::Index ck = 0; ck < nk; ++ck) {
                    cplx acc = 0.0;
                    for (std::size_t u : traced_off)
                        acc += M(static_cast<Eigen::Index>(kept_off[static_cast<std::size_t>(rk)] + u),
                                 static_cast<Eigen::Index>(kept_off[static_cast<std::size_t>(ck)] + u));
                    O(rk, ck) += acc;
                }
        }
    }
    return {out_shape, std::move(out_blocks)};
}

Vector factor_apply(std::span<const AlgebraShape> factors, const Vector& x, std::size_t k,
                    const Matrix& map, const AlgebraShape& new_factor) {
    const auto p = plan_factor_apply(factors, x, k, map, new_factor);
    Vector y(static_cast<Eigen::Index>(p.perm_out.size()));
    const auto din = static_cast<Eigen::Index>(p.dim_in);
    const auto dout = static_cast<Eigen::Index>(p.dim_out);
    const auto right = static_cast<Eigen::Index>(p.right);
    const auto left = static_cast<Eigen::Index>(p.left);
#pragma omp parallel for schedule(static)
    for (Eigen::Index l = 0; l < left; ++l) {
        Matrix slab(din, right);
        for (Eigen::Index d = 0; d < din; ++d)
            for (Eigen::Index r = 0; r < right; ++r)
                slab(d, r) = x(static_cast<Eigen::Index>(p.perm_in[static_cast<std::size_t>((l * din + d) * right + r)]));
        const Matrix out = map * slab;
        for (Eigen::Index d = 0; d < dout; ++d)
            for (Eigen::Index r = 0; r < right; ++r)
                y(static_cast<Eigen::Index>(p.perm_out[static_cast<std::size_t>((l * dout + d) * right + r)])) = out(d, r);
    }
    return y;
}

}  // namespace parallel

}  // namespace qsot::kernels
