#pragma once

// Block-structure algebra over a coordinate direct sum decomposition
// K^d = U_1 + ... + U_m, where U_j is spanned by consecutive axes.

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "anosov/error.hpp"
#include "anosov/linalg.hpp"
#include "anosov/theta_set.hpp"
#include "anosov/words.hpp"

namespace anosov {

inline constexpr double kBlockEntryTol = 1e-12;
inline constexpr double kUnitDetTol = 1e-9;

/// Ordered block dimensions (d_1, ..., d_m); zero-dimensional factors allowed.
class Decomposition {
public:
    Decomposition() = default;

    explicit Decomposition(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) throw InvalidArgument("Decomposition: need at least one factor");
        offsets_.reserve(dims_.size());
        int acc = 0;
        for (int d : dims_) {
            if (d < 0) throw InvalidArgument("Decomposition: negative block dimension");
            offsets_.push_back(acc);
            acc += d;
        }
        total_ = acc;
        if (total_ <= 0) throw InvalidArgument("Decomposition: total dimension must be positive");
    }

    int blocks() const { return static_cast<int>(dims_.size()); }
    int total() const { return total_; }
    int dim(int j) const { return dims_.at(static_cast<std::size_t>(j)); }
    int offset(int j) const { return offsets_.at(static_cast<std::size_t>(j)); }
    const std::vector<int>& dims() const { return dims_; }

    int nonzero_blocks() const {
        return static_cast<int>(std::count_if(dims_.begin(), dims_.end(), [](int d) { return d > 0; }));
    }

    /// Index of the last block with d_j > 0.
    int last_nonzero() const {
        for (int j = blocks() - 1; j >= 0; --j) {
            if (dim(j) > 0) return j;
        }
        return -1;
    }

    /// Nonzero proper partial sums d_1 + ... + d_j: the signature of the
    /// partial flag preserved by block upper triangular maps.
    ThetaSet flag_signature() const {
        std::vector<int> s;
        int acc = 0;
        for (int j = 0; j + 1 < blocks(); ++j) {
            acc += dim(j);
            if (acc > 0 && acc < total_) s.push_back(acc);
        }
        return ThetaSet(total_, std::move(s));
    }

    /// Index of the block containing coordinate axis r.
    int block_of_axis(int r) const {
        for (int j = blocks() - 1; j >= 0; --j) {
            if (dim(j) > 0 && r >= offset(j)) return j;
        }
        throw InvalidArgument("block_of_axis: axis out of range");
    }

    /// dim D_U = (number of nonzero factors) - 1.
    int deformation_dim() const { return nonzero_blocks() - 1; }

    friend bool operator==(const Decomposition&, const Decomposition&) = default;

private:
    std::vector<int> dims_;
    std::vector<int> offsets_;
    int total_ = 0;
};

template <typename Scalar>
void require_size(const Mat<Scalar>& a, const Decomposition& dec, const char* what) {
    if (a.rows() != dec.total() || a.cols() != dec.total()) {
        throw InvalidArgument(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + ", decomposition has total " + std::to_string(dec.total()));
    }
}

template <typename Scalar>
auto block(const Mat<Scalar>& a, const Decomposition& dec, int i, int j) {
    return a.block(dec.offset(i), dec.offset(j), dec.dim(i), dec.dim(j));
}

namespace detail {

template <typename Scalar, typename Pred>
bool blocks_vanish(const Mat<Scalar>& a, const Decomposition& dec, Pred where) {
    const double tol = kBlockEntryTol * max_abs(a);
    for (int i = 0; i < dec.blocks(); ++i) {
        for (int j = 0; j < dec.blocks(); ++j) {
            if (!where(i, j) || dec.dim(i) == 0 || dec.dim(j) == 0) continue;
            if (block(a, dec, i, j).cwiseAbs().maxCoeff() > tol) return false;
        }
    }
    return true;
}

}  // namespace detail

template <typename Scalar>
bool is_block_diagonal(const Mat<Scalar>& a, const Decomposition& dec) {
    require_size(a, dec, "is_block_diagonal");
    return detail::blocks_vanish(a, dec, [](int i, int j) { return i != j; });
}

template <typename Scalar>
bool is_block_upper_triangular(const Mat<Scalar>& a, const Decomposition& dec) {
    require_size(a, dec, "is_block_upper_triangular");
    return detail::blocks_vanish(a, dec, [](int i, int j) { return i > j; });
}

/// Direct sum of the diagonal blocks of a block upper triangular matrix.
template <typename Scalar>
Mat<Scalar> block_diagonalize(const Mat<Scalar>& a, const Decomposition& dec) {
    if (!is_block_upper_triangular(a, dec)) {
        throw HypothesisError("block_diagonalize: matrix is not block upper triangular");
    }
    Mat<Scalar> b = Mat<Scalar>::Zero(a.rows(), a.cols());
    for (int j = 0; j < dec.blocks(); ++j) {
        if (dec.dim(j) > 0) b.block(dec.offset(j), dec.offset(j), dec.dim(j), dec.dim(j)) = block(a, dec, j, j);
    }
    return b;
}

template <typename Scalar>
std::vector<Mat<Scalar>> diagonal_blocks(const Mat<Scalar>& a, const Decomposition& dec) {
    std::vector<Mat<Scalar>> out;
    for (int j = 0; j < dec.blocks(); ++j) out.emplace_back(block(a, dec, j, j));
    return out;
}

template <typename Scalar>
Mat<Scalar> direct_sum(const std::vector<Mat<Scalar>>& blocks) {
    Eigen::Index d = 0;
    for (const auto& b : blocks) d += b.rows();
    Mat<Scalar> out = Mat<Scalar>::Zero(d, d);
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
        out.block(off, off, b.rows(), b.cols()) = b;
        off += b.rows();
    }
    return out;
}

/// Exponent of the scalar C_U uses on block j (0-based): j - floor(m/2).
inline double c_exponent(const Decomposition& dec, int j) {
    return static_cast<double>((j + 1) - dec.blocks() / 2 - 1);
}

/// C_U = direct sum of e^{j - floor(m/2) - 1} id on U_j (1-based j).
/// Its determinant is not 1 in general.
inline MatR c_matrix(const Decomposition& dec) {
    MatR c = MatR::Zero(dec.total(), dec.total());
    for (int j = 0; j < dec.blocks(); ++j) {
        for (int r = 0; r < dec.dim(j); ++r) c(dec.offset(j) + r, dec.offset(j) + r) = std::exp(c_exponent(dec, j));
    }
    return c;
}

/// C^n A C^{-n}, formed entry-wise as e^{n(c_p - c_q)} A_pq to avoid
/// overflowing e^{n c}.
template <typename Scalar>
Mat<Scalar> c_conjugate_power(const Mat<Scalar>& a, const Decomposition& dec, int n) {
    require_size(a, dec, "c_conjugate_power");
    Mat<Scalar> out = a;
    for (int r = 0; r < dec.total(); ++r) {
        for (int c = 0; c < dec.total(); ++c) {
            const double e = n * (c_exponent(dec, dec.block_of_axis(r)) - c_exponent(dec, dec.block_of_axis(c)));
            out(r, c) *= std::exp(e);
        }
    }
    return out;
}

/// Geometric decay rate of ||C^n A C^{-n} - B_U(A)||_F over n = 1..n_max,
/// from a least-squares fit of the log-norm. Returns 0 when A is already
/// block diagonal (the sequence is identically zero).
template <typename Scalar>
double c_limit_decay_rate(const Mat<Scalar>& a, const Decomposition& dec, int n_max = 10) {
    const Mat<Scalar> b = block_diagonalize(a, dec);
    std::vector<double> xs, ys;
    for (int n = 1; n <= n_max; ++n) {
        const double err = (c_conjugate_power(a, dec, n) - b).norm();
        if (err <= 0.0) continue;
        xs.push_back(n);
        ys.push_back(std::log(err));
    }
    if (xs.size() < 2) return 0.0;
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return std::exp(sxy / sxx);
}

/// A / |det A|^{1/d}.
template <typename Scalar>
Mat<Scalar> normalize(const Mat<Scalar>& a) {
    require_square(a, "normalize");
    const double det = abs_det(a);
    if (!(det > 0.0) || !std::isfinite(det)) throw SingularError("normalize: singular matrix");
    return a / std::pow(det, 1.0 / static_cast<double>(a.rows()));
}

/// Element of D_U: sum_j d_j x_j = 0 and x_j = 0 on zero-dimensional factors.
struct DeformVector {
    std::vector<double> x;

    void validate(const Decomposition& dec, double tol = 1e-9) const {
        if (static_cast<int>(x.size()) != dec.blocks()) throw InvalidArgument("DeformVector: wrong number of entries");
        double sum = 0.0, scale = 1.0;
        for (int j = 0; j < dec.blocks(); ++j) {
            const double xj = x[static_cast<std::size_t>(j)];
            if (dec.dim(j) == 0 && xj != 0.0) throw InvalidArgument("DeformVector: nonzero entry on a zero-dimensional factor");
            sum += dec.dim(j) * xj;
            scale += dec.dim(j) * std::abs(xj);
        }
        if (std::abs(sum) > tol * scale) throw InvalidArgument("DeformVector: weighted sum is not zero");
    }

    static DeformVector zero(const Decomposition& dec) { return {std::vector<double>(static_cast<std::size_t>(dec.blocks()), 0.0)}; }
};

template <typename Scalar>
struct BlockNormalized {
    std::vector<Mat<Scalar>> blocks;

    void validate(const Decomposition& dec, double tol = kUnitDetTol) const {
        if (static_cast<int>(blocks.size()) != dec.blocks()) throw InvalidArgument("BlockNormalized: wrong number of blocks");
        for (int j = 0; j < dec.blocks(); ++j) {
            const auto& b = blocks[static_cast<std::size_t>(j)];
            if (b.rows() != dec.dim(j) || b.cols() != dec.dim(j)) throw InvalidArgument("BlockNormalized: block size mismatch");
            if (dec.dim(j) > 0 && std::abs(abs_det(b) - 1.0) > tol) {
                throw HypothesisError("BlockNormalized: |det B_" + std::to_string(j + 1) + "| = " +
                                      std::to_string(abs_det(b)) + " is not 1");
            }
        }
    }
};

/// psi(s, x, B) = direct sum of e^{s + x_j} B_j.
template <typename Scalar>
Mat<Scalar> psi(double s, const DeformVector& x, const BlockNormalized<Scalar>& b, const Decomposition& dec) {
    x.validate(dec);
    if (static_cast<int>(b.blocks.size()) != dec.blocks()) throw InvalidArgument("psi: block count mismatch");
    std::vector<Mat<Scalar>> parts;
    for (int j = 0; j < dec.blocks(); ++j) {
        const auto& bj = b.blocks[static_cast<std::size_t>(j)];
        if (bj.rows() != dec.dim(j)) throw InvalidArgument("psi: block size mismatch");
        parts.push_back(std::exp(s + x.x[static_cast<std::size_t>(j)]) * bj);
    }
    return direct_sum(parts);
}

template <typename Scalar>
struct PsiParts {
    double s = 0.0;
    DeformVector x;
    BlockNormalized<Scalar> b;
};

/// Inverse of psi on invertible block diagonal matrices:
/// s = log|det A|/d, x_j = log|det A_j|/d_j - s, B_j = A_j/|det A_j|^{1/d_j}.
template <typename Scalar>
PsiParts<Scalar> psi_inverse(const Mat<Scalar>& a, const Decomposition& dec) {
    if (!is_block_diagonal(a, dec)) throw HypothesisError("psi_inverse: matrix is not block diagonal");
    PsiParts<Scalar> out;
    std::vector<double> log_dets(static_cast<std::size_t>(dec.blocks()), 0.0);
    double total = 0.0;
    for (int j = 0; j < dec.blocks(); ++j) {
        if (dec.dim(j) == 0) continue;
        const double det = abs_det(Mat<Scalar>(block(a, dec, j, j)));
        if (!(det > 0.0)) throw SingularError("psi_inverse: block " + std::to_string(j + 1) + " is singular");
        log_dets[static_cast<std::size_t>(j)] = std::log(det);
        total += log_dets[static_cast<std::size_t>(j)];
    }
    out.s = total / dec.total();
    out.x = DeformVector::zero(dec);
    for (int j = 0; j < dec.blocks(); ++j) {
        if (dec.dim(j) == 0) {
            out.b.blocks.emplace_back(0, 0);
            continue;
        }
        const double per = log_dets[static_cast<std::size_t>(j)] / dec.dim(j);
        out.x.x[static_cast<std::size_t>(j)] = per - out.s;
        out.b.blocks.push_back(Mat<Scalar>(block(a, dec, j, j)) / std::exp(per));
    }
    return out;
}

enum class Structure { general, upper_triangular, block_diagonal, block_normalized };

inline const char* to_string(Structure s) {
    switch (s) {
        case Structure::general: return "general";
        case Structure::upper_triangular: return "upper_triangular";
        case Structure::block_diagonal: return "block_diagonal";
        case Structure::block_normalized: return "block_normalized";
    }
    return "general";
}

inline Structure parse_structure(const std::string& s) {
    if (s == "general") return Structure::general;
    if (s == "upper_triangular") return Structure::upper_triangular;
    if (s == "block_diagonal") return Structure::block_diagonal;
    if (s == "block_normalized") return Structure::block_normalized;
    throw InvalidArgument("unknown structure tag '" + s + "'");
}

/// Representation of a free group by its generator images, together with a
/// decomposition and a verified structure tag.
template <typename Scalar>
class RepSpec {
public:
    RepSpec(FreeGroup group, Decomposition dec, std::vector<Mat<Scalar>> images, Structure structure)
        : group_(std::move(group)), dec_(std::move(dec)), images_(std::move(images)), structure_(structure) {
        if (static_cast<int>(images_.size()) != group_.rank()) {
            throw InvalidArgument("RepSpec: expected " + std::to_string(group_.rank()) + " generator images");
        }
        for (int g = 0; g < group_.rank(); ++g) {
            const auto& m = images_[static_cast<std::size_t>(g)];
            const std::string where = "generator '" + group_.names()[static_cast<std::size_t>(g)] + "'";
            if (m.rows() != dec_.total() || m.cols() != dec_.total()) {
                throw InvalidArgument(where + ": image is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                      ", expected " + std::to_string(dec_.total()) + "x" + std::to_string(dec_.total()));
            }
            if (!all_finite(m)) throw InvalidArgument(where + ": non-finite entry");
            try {
                inverses_.push_back(checked_inverse(m));
            } catch (const SingularError&) {
                throw SingularError(where + ": image is not invertible");
            }
            verify_structure(m, where);
        }
        if (is_structured()) {
            block_images_.resize(static_cast<std::size_t>(dec_.blocks()));
            block_inverses_.resize(static_cast<std::size_t>(dec_.blocks()));
            for (int j = 0; j < dec_.blocks(); ++j) {
                for (int g = 0; g < group_.rank(); ++g) {
                    Mat<Scalar> bj = block(images_[static_cast<std::size_t>(g)], dec_, j, j);
                    block_images_[static_cast<std::size_t>(j)].push_back(bj);
                    block_inverses_[static_cast<std::size_t>(j)].push_back(dec_.dim(j) > 0 ? checked_inverse(bj) : bj);
                }
            }
        }
    }

    const FreeGroup& group() const { return group_; }
    const Decomposition& decomposition() const { return dec_; }
    const std::vector<Mat<Scalar>>& images() const { return images_; }
    const Mat<Scalar>& image(int g) const { return images_.at(static_cast<std::size_t>(g)); }
    Structure structure() const { return structure_; }
    int dim() const { return dec_.total(); }

    /// Block upper triangular (hence block diagonalizable) tags.
    bool is_structured() const { return structure_ != Structure::general; }

    Mat<Scalar> evaluate(const Word& w) const { return product(w, images_, inverses_, dim()); }

    /// Diagonal block j of rho(w); for block upper triangular reps this is
    /// the product of the generators' diagonal blocks.
    Mat<Scalar> evaluate_block(int j, const Word& w) const {
        require_structured();
        const auto& bi = block_images_.at(static_cast<std::size_t>(j));
        const auto& bv = block_inverses_.at(static_cast<std::size_t>(j));
        return product(w, bi, bv, dec_.dim(j));
    }

    Mat<Scalar> evaluate_block_inverse(int j, const Word& w) const { return evaluate_block(j, invert(w)); }

    /// Rep with every image replaced by P^-1 A P; structure becomes general
    /// unless keep_structure is set.
    RepSpec conjugated(const Mat<Scalar>& p, bool keep_structure = false) const {
        const Mat<Scalar> pinv = checked_inverse(p);
        std::vector<Mat<Scalar>> imgs;
        for (const auto& m : images_) imgs.push_back(pinv * m * p);
        return RepSpec(group_, dec_, std::move(imgs), keep_structure ? structure_ : Structure::general);
    }

private:
    void require_structured() const {
        if (!is_structured()) throw HypothesisError("representation is not block upper triangular");
    }

    void verify_structure(const Mat<Scalar>& m, const std::string& where) const {
        switch (structure_) {
            case Structure::general: break;
            case Structure::upper_triangular:
                if (!is_block_upper_triangular(m, dec_)) throw HypothesisError(where + ": image is not block upper triangular");
                break;
            case Structure::block_diagonal:
                if (!is_block_diagonal(m, dec_)) throw HypothesisError(where + ": image is not block diagonal");
                break;
            case Structure::block_normalized: {
                if (!is_block_diagonal(m, dec_)) throw HypothesisError(where + ": image is not block diagonal");
                try {
                    BlockNormalized<Scalar>{diagonal_blocks(m, dec_)}.validate(dec_);
                } catch (const HypothesisError& e) {
                    throw HypothesisError(where + ": " + e.what());
                }
                break;
            }
        }
    }

    static Mat<Scalar> product(const Word& w, const std::vector<Mat<Scalar>>& fwd, const std::vector<Mat<Scalar>>& inv,
                               int d) {
        Mat<Scalar> out = identity<Scalar>(d);
        for (Letter l : w.letters()) {
            out = out * (l.exp > 0 ? fwd : inv)[static_cast<std::size_t>(l.gen)];
        }
        return out;
    }

    FreeGroup group_;
    Decomposition dec_;
    std::vector<Mat<Scalar>> images_;
    std::vector<Mat<Scalar>> inverses_;
    Structure structure_;
    std::vector<std::vector<Mat<Scalar>>> block_images_;
    std::vector<std::vector<Mat<Scalar>>> block_inverses_;
};

/// Values of homomorphisms F_n -> R and F_n -> D_U on the generators.
struct Deformation {
    std::vector<double> delta;
    std::vector<DeformVector> phi;

    static Deformation zero(int rank, const Decomposition& dec) {
        return {std::vector<double>(static_cast<std::size_t>(rank), 0.0),
                std::vector<DeformVector>(static_cast<std::size_t>(rank), DeformVector::zero(dec))};
    }

    void validate(int rank, const Decomposition& dec) const {
        if (static_cast<int>(delta.size()) != rank || static_cast<int>(phi.size()) != rank) {
            throw InvalidArgument("Deformation: need one value per generator");
        }
        for (const auto& p : phi) p.validate(dec);
    }

    /// delta(w) through the abelianization.
    double delta_at(const std::vector<int>& ab) const {
        double v = 0.0;
        for (std::size_t g = 0; g < ab.size(); ++g) v += ab[g] * delta[g];
        return v;
    }

    double phi_at(const std::vector<int>& ab, int j) const {
        double v = 0.0;
        for (std::size_t g = 0; g < ab.size(); ++g) v += ab[g] * phi[g].x[static_cast<std::size_t>(j)];
        return v;
    }
};

/// beta_U(delta, phi, zeta)(w) = direct sum of e^{delta(w) + phi_j(w)} zeta_j(w).
template <typename Scalar>
Mat<Scalar> beta_eval(const Deformation& def, const RepSpec<Scalar>& zeta, const Word& w) {
    if (zeta.structure() != Structure::block_normalized) throw HypothesisError("beta_eval: zeta must be block normalized");
    if (w.rank() != zeta.group().rank()) throw InvalidArgument("beta_eval: word from a different free group");
    const Decomposition& dec = zeta.decomposition();
    def.validate(zeta.group().rank(), dec);
    const auto ab = abelianize(w);
    const double d = def.delta_at(ab);
    std::vector<Mat<Scalar>> parts;
    for (int j = 0; j < dec.blocks(); ++j) parts.push_back(std::exp(d + def.phi_at(ab, j)) * zeta.evaluate_block(j, w));
    return direct_sum(parts);
}

/// The block diagonal representation beta_U(delta, phi, zeta) as a RepSpec.
template <typename Scalar>
RepSpec<Scalar> beta_rep(const Deformation& def, const RepSpec<Scalar>& zeta) {
    std::vector<Mat<Scalar>> imgs;
    for (int g = 0; g < zeta.group().rank(); ++g) imgs.push_back(beta_eval(def, zeta, zeta.group().gen(g)));
    const bool normalized = std::all_of(def.phi.begin(), def.phi.end(), [](const DeformVector& p) {
        return std::all_of(p.x.begin(), p.x.end(), [](double v) { return v == 0.0; });
    }) && std::all_of(def.delta.begin(), def.delta.end(), [](double v) { return v == 0.0; });
    return RepSpec<Scalar>(zeta.group(), zeta.decomposition(), std::move(imgs),
                           normalized ? Structure::block_normalized : Structure::block_diagonal);
}

/// Splits a block diagonal rep into (delta, phi, zeta) with zeta block
/// normalized, by applying psi_inverse to every generator image.
template <typename Scalar>
std::pair<Deformation, RepSpec<Scalar>> normalize_rep(const RepSpec<Scalar>& rep) {
    const Decomposition& dec = rep.decomposition();
    Deformation def;
    std::vector<Mat<Scalar>> imgs;
    for (int g = 0; g < rep.group().rank(); ++g) {
        Mat<Scalar> a = rep.image(g);
        if (rep.structure() == Structure::upper_triangular) a = block_diagonalize(a, dec);
        auto parts = psi_inverse(a, dec);
        def.delta.push_back(parts.s);
        def.phi.push_back(parts.x);
        imgs.push_back(direct_sum(parts.b.blocks));
    }
    return {def, RepSpec<Scalar>(rep.group(), dec, std::move(imgs), Structure::block_normalized)};
}

}  // namespace anosov
