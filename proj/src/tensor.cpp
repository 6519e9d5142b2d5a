#include "tbdoa/tensor.hpp"

namespace tbdoa {

CMat khatri_rao(const CMat& a, const CMat& b) {
    if (a.cols() != b.cols())
        throw std::invalid_argument("khatri_rao: column-count mismatch");
    const Index m = a.rows(), n = b.rows(), l = a.cols();
    CMat out(m * n, l);
    for (Index j = 0; j < l; ++j)
        for (Index i = 0; i < m; ++i)
            out.block(i * n, j, n, 1) = a(i, j) * b.col(j);
    return out;
}

CVec vec(const CMat& m) { return m.reshaped(); }

CVec vec_mat_diag_mat(const CMat& a, const CVec& b, const CMat& c) {
    if (a.cols() != b.size() || c.rows() != b.size())
        throw std::invalid_argument("vec_mat_diag_mat: dimension mismatch");
    return vec(a * b.asDiagonal() * c);
}

CMat unfold(const Tensor3& t, int mode) {
    const Index d1 = t.dim(0), d2 = t.dim(1), d3 = t.dim(2);
    switch (mode) {
    case 1:
        // The storage order makes mode 1 a plain reshape.
        return Eigen::Map<const CMat>(t.data().data(), d1, d2 * d3);
    case 2: {
        CMat out(d2, d1 * d3);
        for (Index q = 0; q < d3; ++q)
            for (Index n = 0; n < d2; ++n)
                for (Index k = 0; k < d1; ++k)
                    out(n, q * d1 + k) = t(k, n, q);
        return out;
    }
    case 3: {
        CMat out(d3, d1 * d2);
        for (Index q = 0; q < d3; ++q)
            for (Index n = 0; n < d2; ++n)
                for (Index k = 0; k < d1; ++k)
                    out(q, k * d2 + n) = t(k, n, q);
        return out;
    }
    default:
        throw std::invalid_argument("unfold: mode must be 1, 2 or 3");
    }
}

Tensor3 fold(const CMat& m, int mode, Index d1, Index d2, Index d3) {
    Tensor3 t(d1, d2, d3);
    auto check = [&](Index rows, Index cols) {
        if (m.rows() != rows || m.cols() != cols)
            throw std::invalid_argument("fold: matrix shape does not match target dims");
    };
    switch (mode) {
    case 1:
        check(d1, d2 * d3);
        Eigen::Map<CMat>(t.data().data(), d1, d2 * d3) = m;
        break;
    case 2:
        check(d2, d1 * d3);
        for (Index q = 0; q < d3; ++q)
            for (Index n = 0; n < d2; ++n)
                for (Index k = 0; k < d1; ++k)
                    t(k, n, q) = m(n, q * d1 + k);
        break;
    case 3:
        check(d3, d1 * d2);
        for (Index q = 0; q < d3; ++q)
            for (Index n = 0; n < d2; ++n)
                for (Index k = 0; k < d1; ++k)
                    t(k, n, q) = m(q, k * d2 + n);
        break;
    default:
        throw std::invalid_argument("fold: mode must be 1, 2 or 3");
    }
    return t;
}

Tensor3 cp_reconstruct(const FactorTriple& f) {
    f.validate();
    const CMat m1 = f.x * khatri_rao(f.c, f.b).transpose();
    return fold(m1, 1, f.x.rows(), f.b.rows(), f.c.rows());
}

Tensor3 cp_reconstruct(const FactorTriple& f, const RVec& amplitudes) {
    f.validate();
    if (amplitudes.size() != f.rank())
        throw std::invalid_argument("cp_reconstruct: amplitude count must equal the rank");
    FactorTriple scaled = f;
    scaled.x = f.x * amplitudes.asDiagonal();
    return cp_reconstruct(scaled);
}

double cp_fit(const Tensor3& t, const FactorTriple& f) {
    const double norm_t = t.norm();
    if (norm_t == 0.0)
        throw std::invalid_argument("cp_fit: undefined for a zero tensor");
    const Tensor3 rec = cp_reconstruct(f);
    if (!rec.same_dims(t))
        throw std::invalid_argument("cp_fit: factor dimensions do not match the tensor");
    return 1.0 - (t.data() - rec.data()).norm() / norm_t;
}

} // namespace tbdoa
