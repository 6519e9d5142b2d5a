#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace tbdoa {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense 3-way complex array with the first index fastest in memory.
///
/// Throughout the library the three axes are (beam k, receive element n,
/// pulse q), but nothing in this class depends on that interpretation.
class Tensor3 {
  public:
    Tensor3() = default;

    Tensor3(Index d1, Index d2, Index d3) : d1_(d1), d2_(d2), d3_(d3) {
        if (d1 < 1 || d2 < 1 || d3 < 1)
            throw std::invalid_argument("Tensor3: dimensions must be positive");
        data_ = CVec::Zero(d1 * d2 * d3);
    }

    Index dim(int axis) const {
        switch (axis) {
        case 0: return d1_;
        case 1: return d2_;
        case 2: return d3_;
        default: throw std::invalid_argument("Tensor3::dim: axis must be 0, 1 or 2");
        }
    }

    Index size() const { return data_.size(); }

    cxd& operator()(Index i, Index j, Index k) { return data_[i + d1_ * (j + d2_ * k)]; }
    const cxd& operator()(Index i, Index j, Index k) const {
        return data_[i + d1_ * (j + d2_ * k)];
    }

    CVec& data() { return data_; }
    const CVec& data() const { return data_; }

    /// Frobenius norm.
    double norm() const { return data_.norm(); }

    bool same_dims(const Tensor3& other) const {
        return d1_ == other.d1_ && d2_ == other.d2_ && d3_ == other.d3_;
    }

  private:
    Index d1_ = 0, d2_ = 0, d3_ = 0;
    CVec data_;
};

/// The three factor matrices of a rank-L CP model: x (d1 x L), b (d2 x L),
/// c (d3 x L). Column l of each factor together forms one rank-1 term.
struct FactorTriple {
    CMat x;
    CMat b;
    CMat c;

    Index rank() const { return x.cols(); }

    void validate() const {
        if (x.cols() < 1)
            throw std::invalid_argument("FactorTriple: rank must be >= 1");
        if (b.cols() != x.cols() || c.cols() != x.cols())
            throw std::invalid_argument("FactorTriple: factors must share the column count");
    }
};

/// Column-wise Kronecker product. For a (M x L) and b (N x L) the result is
/// (M*N x L) with row a*N + b holding A(a,l)*B(b,l).
CMat khatri_rao(const CMat& a, const CMat& b);

/// Column-major vectorization of a matrix.
CVec vec(const CMat& m);

/// vec(A * diag(b) * C). Equals khatri_rao(C.transpose(), A) * b.
CVec vec_mat_diag_mat(const CMat& a, const CVec& b, const CMat& c);

/// Mode-m matricization, modes numbered 1..3.
///   mode 1: d1 x (d2*d3), column q*d2 + n
///   mode 2: d2 x (d1*d3), column q*d1 + k
///   mode 3: d3 x (d1*d2), column k*d2 + n
CMat unfold(const Tensor3& t, int mode);

/// Inverse of unfold for the given mode and target dimensions.
Tensor3 fold(const CMat& m, int mode, Index d1, Index d2, Index d3);

/// Sum of rank-1 outer products x_l (o) b_l (o) c_l.
Tensor3 cp_reconstruct(const FactorTriple& f);

/// As above with each term scaled by amplitudes[l].
Tensor3 cp_reconstruct(const FactorTriple& f, const RVec& amplitudes);

/// 1 - ||T - reconstruct(f)||_F / ||T||_F. Throws for a zero tensor.
double cp_fit(const Tensor3& t, const FactorTriple& f);

} // namespace tbdoa
