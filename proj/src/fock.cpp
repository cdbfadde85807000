#include "casimir/fock.hpp"

#include <complex>

namespace casimir {

using namespace std::complex_literals;

HilbertSpace::HilbertSpace(std::vector<ModeSpec> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) throw Error("EmptySpace: mode list is empty");
    for (const auto& m : modes_) {
        if (m.truncation < 2) throw Error("ModeSpec: truncation must be >= 2");
        if (!(m.frequency > 0.0)) throw Error("ModeSpec: frequency must be > 0");
    }
    strides_.assign(modes_.size(), 1);
    for (int i = static_cast<int>(modes_.size()) - 2; i >= 0; --i) {
        strides_[static_cast<std::size_t>(i)] =
            strides_[static_cast<std::size_t>(i) + 1] * modes_[static_cast<std::size_t>(i) + 1].truncation;
    }
    dim_ = strides_[0] * modes_[0].truncation;
}

long HilbertSpace::index_of(const std::vector<int>& occupation) const {
    if (occupation.size() != modes_.size())
        throw Error("index_of: occupation tuple has wrong length");
    long idx = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (occupation[i] < 0 || occupation[i] >= modes_[i].truncation)
            throw Error("index_of: occupation outside truncation");
        idx += occupation[i] * strides_[i];
    }
    return idx;
}

HilbertSpace build_space(std::vector<ModeSpec> modes) { return HilbertSpace(std::move(modes)); }

OperatorMatrix identity_operator(const HilbertSpace& space) {
    return {space, Eigen::MatrixXcd::Identity(space.dim(), space.dim()), true};
}

OperatorMatrix ladder_operator(const HilbertSpace& space, int mode_idx, Ladder which) {
    if (mode_idx < 0 || mode_idx >= space.n_modes())
        throw Error("ladder_operator: mode index out of range");
    const long d = space.dim();
    const long stride = space.stride(mode_idx);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (long i = 0; i < d; ++i) {
        const int n = space.occupation(i, mode_idx);
        if (n > 0) a(i - stride, i) = std::sqrt(static_cast<double>(n));
    }
    if (which == Ladder::Raise) a = a.adjoint().eval();
    return {space, std::move(a), false};
}

OperatorMatrix number_operator(const HilbertSpace& space, int mode_idx) {
    if (mode_idx < 0 || mode_idx >= space.n_modes())
        throw Error("number_operator: mode index out of range");
    const long d = space.dim();
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(d, d);
    for (long i = 0; i < d; ++i) n(i, i) = space.occupation(i, mode_idx);
    return {space, std::move(n), true};
}

OperatorMatrix quadrature_operator(const HilbertSpace& space, int mode_idx, Quadrature which) {
    const OperatorMatrix a = ladder_operator(space, mode_idx, Ladder::Lower);
    Eigen::MatrixXcd m;
    if (which == Quadrature::X) {
        m = 0.5 * (a.mat.adjoint() + a.mat);
    } else {
        m = 0.5i * (a.mat.adjoint() - a.mat);
    }
    return {space, std::move(m), true};
}

} // namespace casimir
