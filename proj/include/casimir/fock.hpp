// fock.hpp — truncated multimode Fock space and bare operator algebra

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

enum class ModeKind { Optical, Mechanical };

// One bosonic mode: frequency in units hbar = c = k_B = 1, Fock levels
// 0 .. truncation-1.
struct ModeSpec {
    ModeKind kind{ModeKind::Optical};
    double frequency{1.0};
    int truncation{2};

    friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

// Tensor product of truncated oscillators. Index convention is row-major
// over occupation tuples with mode 0 slowest-varying; this map is fixed so
// cached eigendecompositions stay portable.
class HilbertSpace {
public:
    explicit HilbertSpace(std::vector<ModeSpec> modes);

    long dim() const { return dim_; }
    int n_modes() const { return static_cast<int>(modes_.size()); }
    const ModeSpec& mode(int i) const { return modes_.at(static_cast<std::size_t>(i)); }
    const std::vector<ModeSpec>& modes() const { return modes_; }

    // Occupation of mode `i` within basis state `index`.
    int occupation(long index, int i) const {
        return static_cast<int>((index / strides_[static_cast<std::size_t>(i)]) %
                                modes_[static_cast<std::size_t>(i)].truncation);
    }
    long stride(int i) const { return strides_[static_cast<std::size_t>(i)]; }
    long index_of(const std::vector<int>& occupation) const;

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

private:
    std::vector<ModeSpec> modes_;
    std::vector<long> strides_;
    long dim_{0};
};

HilbertSpace build_space(std::vector<ModeSpec> modes);

// Dense operator on a HilbertSpace with Hermiticity metadata.
struct OperatorMatrix {
    HilbertSpace space;
    Eigen::MatrixXcd mat;
    bool hermitian{false};

    double hermiticity_error() const { return (mat - mat.adjoint()).cwiseAbs().maxCoeff(); }
};

enum class Ladder { Lower, Raise };
enum class Quadrature { X, P };

OperatorMatrix identity_operator(const HilbertSpace& space);
OperatorMatrix ladder_operator(const HilbertSpace& space, int mode_idx, Ladder which);
OperatorMatrix number_operator(const HilbertSpace& space, int mode_idx);
// X = (a^dag + a)/2, P = i(a^dag - a)/2; note the 1/2 convention, so
// [X, P] = i/2 below the truncation edge.
OperatorMatrix quadrature_operator(const HilbertSpace& space, int mode_idx, Quadrature which);

} // namespace casimir
