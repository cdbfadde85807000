#include "casimir/thermo.hpp"

#include <cmath>

namespace casimir {

namespace {

std::complex<double> trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    // Tr[a b] = sum_{jk} a_{jk} b_{kj}
    return (a.array() * b.transpose().array()).sum();
}

} // namespace

HeatFlows heat_flows(const Eigen::MatrixXcd& rho, const Liouvillian& L) {
    HeatFlows out;
    const auto& E = L.energies();
    for (int i = 0; i < L.n_baths(); ++i) {
        Eigen::MatrixXcd lrho = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
        L.apply_bath(rho, lrho, i);
        std::complex<double> j = 0.0;
        for (long k = 0; k < E.size(); ++k) j += E(k) * lrho(k, k);
        if (L.bath(i).target == BathTarget::Cavity) {
            out.J_c += j.real();
            out.imag_c += j.imag();
        } else {
            out.J_w += j.real();
            out.imag_w += j.imag();
        }
    }
    return out;
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (long i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = std::max(es.eigenvalues()(i), floor);
        s -= lam * std::log(lam);
    }
    return std::max(s, 0.0);
}

namespace {

Eigen::MatrixXcd log_density(const Eigen::MatrixXcd& rho, double floor, double* entropy_out) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXd loglam(lam.size());
    double s = 0.0;
    for (long i = 0; i < lam.size(); ++i) {
        const double l = std::max(lam(i), floor);
        loglam(i) = std::log(l);
        s -= l * std::log(l);
    }
    if (entropy_out) *entropy_out = std::max(s, 0.0);
    return es.eigenvectors() * loglam.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

double entropy_production_rate(const Eigen::MatrixXcd& rho, const Liouvillian& L,
                               double eig_floor) {
    const Eigen::MatrixXcd lnrho = log_density(rho, eig_floor, nullptr);
    const auto& E = L.energies();
    double sigma = 0.0;
    for (int i = 0; i < L.n_baths(); ++i) {
        Eigen::MatrixXcd lrho = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
        L.apply_bath(rho, lrho, i);
        sigma -= trace_product(lrho, lnrho).real();
        double j = 0.0;
        for (long k = 0; k < E.size(); ++k) j += E(k) * lrho(k, k).real();
        const double T = L.bath(i).temperature;
        if (T > 0.0) sigma -= j / T;
    }
    return sigma;
}

PopulationOps::PopulationOps(const EigenDecomposition& eig, const HilbertSpace& space,
                             const std::vector<DressedTransitionTable>& optical_tables,
                             const DressedTransitionTable& wall_table,
                             PopulationConvention convention)
    : convention_(convention) {
    if (optical_tables.size() != 2)
        throw Error("PopulationOps: expected the two optical-mode tables");
    const long d = eig.energies.size();
    if (convention == PopulationConvention::Bare) {
        auto to_eig = [&](int mode) {
            const Eigen::MatrixXcd n = number_operator(space, mode).mat;
            return (eig.states.adjoint() * n * eig.states).eval();
        };
        n1_ = to_eig(0);
        n2_ = to_eig(1);
        nw_ = to_eig(space.n_modes() - 1);
    } else {
        auto dressed_number = [&](const DressedTransitionTable& t) {
            const Eigen::MatrixXcd O = dressed_lowering_operator(t, d);
            return (O.adjoint() * O).eval();
        };
        n1_ = dressed_number(optical_tables[0]);
        n2_ = dressed_number(optical_tables[1]);
        nw_ = dressed_number(wall_table);
    }
}

ModePopulations PopulationOps::eval(const Eigen::MatrixXcd& rho) const {
    ModePopulations p;
    p.n_mode1 = trace_product(rho, n1_).real();
    p.n_mode2 = trace_product(rho, n2_).real();
    p.n_wall = trace_product(rho, nw_).real();
    return p;
}

ModePopulations mode_populations(const Eigen::MatrixXcd& rho, const PopulationOps& ops) {
    return ops.eval(rho);
}

RecordFn make_record_evaluator(const Liouvillian& L, const PopulationOps& ops, double kappa0) {
    // Capture by value; PopulationOps holds the precomputed operators.
    const PopulationOps pops = ops;
    const Liouvillian* lp = &L;
    return [pops, lp, kappa0](double t, const Eigen::MatrixXcd& rho) {
        TrajectoryRecord rec;
        rec.t_kappa0 = t * kappa0;
        rec.trace = rho.trace().real();

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
        const Eigen::VectorXd& lam = es.eigenvalues();
        rec.min_eig = lam.minCoeff();
        Eigen::VectorXd loglam(lam.size());
        double s = 0.0;
        for (long i = 0; i < lam.size(); ++i) {
            const double l = std::max(lam(i), 1e-14);
            loglam(i) = std::log(l);
            s -= l * std::log(l);
        }
        rec.S = std::max(s, 0.0);
        const Eigen::MatrixXcd lnrho =
            es.eigenvectors() * loglam.asDiagonal() * es.eigenvectors().adjoint();

        const auto& E = lp->energies();
        double sigma = 0.0;
        for (int i = 0; i < lp->n_baths(); ++i) {
            Eigen::MatrixXcd lrho = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
            lp->apply_bath(rho, lrho, i);
            double j = 0.0;
            for (long k = 0; k < E.size(); ++k) j += E(k) * lrho(k, k).real();
            if (lp->bath(i).target == BathTarget::Cavity)
                rec.J_c += j;
            else
                rec.J_w += j;
            sigma -= (lrho.array() * lnrho.transpose().array()).sum().real();
            const double T = lp->bath(i).temperature;
            if (T > 0.0) sigma -= j / T;
        }
        rec.Sigma_dot = sigma;

        const ModePopulations p = pops.eval(rho);
        rec.n_wall = p.n_wall;
        rec.n_mode1 = p.n_mode1;
        rec.n_mode2 = p.n_mode2;
        return rec;
    };
}

} // namespace casimir
