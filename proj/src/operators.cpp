#include "emq/operators.hpp"

#include <cmath>
#include <vector>

namespace emq {

namespace {

int qubits_for(Index d_physical) {
    int n = 0;
    while ((Index{1} << n) < d_physical) ++n;
    return n;
}

void check_compatible(const StateLayout& layout, const std::vector<MediumSpec>& media) {
    if (static_cast<Index>(media.size()) != layout.cells)
        throw LayoutMismatch("need one MediumSpec per grid cell");
    const MediumSpec& ref = media.front();
    for (const auto& m : media) {
        if (m.eps0 != ref.eps0 || m.mu0 != ref.mu0)
            throw LayoutMismatch("eps0/mu0 must be uniform across cells");
        if (m.electric_poles.size() != ref.electric_poles.size() ||
            m.magnetic_poles.size() != ref.magnetic_poles.size())
            throw LayoutMismatch("pole counts differ between cells");
        for (std::size_t l = 0; l < m.electric_poles.size(); ++l)
            if ((m.electric_poles[l].resonance == 0.0) != (ref.electric_poles[l].resonance == 0.0))
                throw LayoutMismatch("Drude/Lorentz pattern differs between cells");
        for (std::size_t l = 0; l < m.magnetic_poles.size(); ++l)
            if ((m.magnetic_poles[l].resonance == 0.0) != (ref.magnetic_poles[l].resonance == 0.0))
                throw LayoutMismatch("Drude/Lorentz pattern differs between cells");
    }
    if (media.front().pole_count() != layout.poles.size())
        throw LayoutMismatch("media incompatible with layout pole structure");
}

}  // namespace

StateLayout build_layout(const GridSpec& grid, const MediumSpec& medium) {
    if (grid.cells < 2 || grid.spacing <= 0.0)
        throw ValidationError("grid needs cells >= 2 and spacing > 0");
    validate_medium(medium);

    StateLayout layout;
    layout.cells = grid.cells;
    const Index nx = grid.cells;
    const std::size_t n_poles = medium.pole_count();
    layout.poles.resize(n_poles);

    Index next = 2 * nx;  // u block: E then H
    for (std::size_t l = 0; l < n_poles; ++l) {
        auto& pb = layout.poles[l];
        pb.has_electric = l < medium.electric_poles.size();
        pb.has_magnetic = l < medium.magnetic_poles.size();
        pb.electric_drude = pb.has_electric && medium.electric_poles[l].resonance == 0.0;
        pb.magnetic_drude = pb.has_magnetic && medium.magnetic_poles[l].resonance == 0.0;
        if (pb.has_electric && !pb.electric_drude) { pb.p_electric = next; next += nx; }
        if (pb.has_magnetic && !pb.magnetic_drude) { pb.p_magnetic = next; next += nx; }
    }
    for (std::size_t l = 0; l < n_poles; ++l) {
        auto& pb = layout.poles[l];
        if (pb.has_electric) { pb.pt_electric = next; next += nx; }
        if (pb.has_magnetic) { pb.pt_magnetic = next; next += nx; }
    }
    layout.d_physical = next;
    layout.r = next - (2 * nx);
    for (const auto& pb : layout.poles) {
        if (pb.p_electric >= 0) layout.r -= nx;
        if (pb.p_magnetic >= 0) layout.r -= nx;
    }
    layout.qubits = qubits_for(layout.d_physical);
    layout.d = Index{1} << layout.qubits;
    return layout;
}

GeneratorPair build_generators(const StateLayout& layout, const GridSpec& grid,
                               const std::vector<MediumSpec>& media) {
    check_compatible(layout, media);

    const Index nx = layout.cells;
    const double eps0 = media.front().eps0;
    const double mu0 = media.front().mu0;
    const double c0 = 1.0 / (2.0 * grid.spacing * std::sqrt(eps0 * mu0));
    const Complex mi(0.0, -1.0);
    const Complex pi_(0.0, 1.0);

    std::vector<Eigen::Triplet<Complex>> trips;
    // curl block, centered differences with zero Dirichlet ghosts
    for (Index q = 0; q < nx; ++q) {
        if (q + 1 < nx) {
            trips.emplace_back(layout.e_index(q), layout.h_index(q + 1), mi * c0);
            trips.emplace_back(layout.h_index(q), layout.e_index(q + 1), mi * c0);
        }
        if (q - 1 >= 0) {
            trips.emplace_back(layout.e_index(q), layout.h_index(q - 1), pi_ * c0);
            trips.emplace_back(layout.h_index(q), layout.e_index(q - 1), pi_ * c0);
        }
    }

    Eigen::VectorXd ddiss = Eigen::VectorXd::Zero(layout.d);

    auto couple = [&](Branch b, std::size_t l, Index q, const LorentzPole& pole, bool has_p) {
        const Index u = (b == Branch::Electric) ? layout.e_index(q) : layout.h_index(q);
        const Index pt = layout.pt_index(b, l, q);
        trips.emplace_back(u, pt, mi * pole.coupling);
        trips.emplace_back(pt, u, pi_ * pole.coupling);
        if (has_p) {
            const Index p = layout.p_index(b, l, q);
            trips.emplace_back(p, pt, pi_ * pole.resonance);
            trips.emplace_back(pt, p, mi * pole.resonance);
        }
        ddiss[pt] = 2.0 * pole.damping;  // substituted rate
    };

    for (Index q = 0; q < nx; ++q) {
        const MediumSpec& m = media[q];
        for (std::size_t l = 0; l < layout.poles.size(); ++l) {
            const auto& pb = layout.poles[l];
            if (pb.has_electric)
                couple(Branch::Electric, l, q, m.electric_poles[l], pb.p_electric >= 0);
            if (pb.has_magnetic)
                couple(Branch::Magnetic, l, q, m.magnetic_poles[l], pb.p_magnetic >= 0);
        }
    }

    GeneratorPair gen;
    gen.layout = layout;
    gen.d0 = SparseMatrix(layout.d, layout.d);
    gen.d0.setFromTriplets(trips.begin(), trips.end());
    gen.ddiss = std::move(ddiss);
    return gen;
}

StateVector encode_initial_state(const Eigen::VectorXd& e_field,
                                 const Eigen::VectorXd& h_field,
                                 const StateLayout& layout, const GridSpec& grid,
                                 const MediumSpec& medium) {
    if (e_field.size() != layout.cells || h_field.size() != layout.cells)
        throw DimensionMismatch("field arrays must have one entry per cell");

    Vector raw = Vector::Zero(layout.d);
    const double se = std::sqrt(medium.eps0);
    const double sh = std::sqrt(medium.mu0);
    for (Index q = 0; q < layout.cells; ++q) {
        raw[layout.e_index(q)] = se * e_field[q];
        raw[layout.h_index(q)] = sh * h_field[q];
    }
    const double nrm2 = raw.squaredNorm();
    if (nrm2 == 0.0) throw ZeroField("cannot normalize an all-zero field");

    StateVector psi;
    psi.amplitudes = raw / std::sqrt(nrm2);
    psi.norm_scale = nrm2 * grid.spacing;  // E0
    return psi;
}

Observables observables(const StateVector& psi, const StateLayout& layout,
                        const GridSpec& grid, const std::vector<MediumSpec>& media) {
    check_compatible(layout, media);

    Observables obs;
    const double scale = psi.norm_scale;
    obs.total_energy = 0.5 * scale * psi.amplitudes.squaredNorm();
    double u_norm2 = 0.0;
    for (Index q = 0; q < layout.cells; ++q)
        u_norm2 += std::norm(psi.amplitudes[layout.e_index(q)]) +
                   std::norm(psi.amplitudes[layout.h_index(q)]);
    obs.electric_energy = 0.5 * scale * u_norm2;

    // invert the encoding weights to recover P and M
    obs.polarization = Eigen::VectorXd::Zero(layout.cells);
    obs.magnetization = Eigen::VectorXd::Zero(layout.cells);
    const double s = std::sqrt(scale / grid.spacing);
    for (Index q = 0; q < layout.cells; ++q) {
        const MediumSpec& m = media[q];
        for (std::size_t l = 0; l < layout.poles.size(); ++l) {
            const auto& pb = layout.poles[l];
            if (pb.p_electric >= 0) {
                const auto& pole = m.electric_poles[l];
                const double pl = (psi.amplitudes[layout.p_index(Branch::Electric, l, q)] * s /
                                   (std::sqrt(m.eps0) * pole.coupling * pole.resonance)).real();
                obs.polarization[q] += m.eps0 * pole.coupling * pole.coupling * pl;
            }
            if (pb.p_magnetic >= 0) {
                const auto& pole = m.magnetic_poles[l];
                const double ml = (psi.amplitudes[layout.p_index(Branch::Magnetic, l, q)] * s /
                                   (std::sqrt(m.mu0) * pole.coupling * pole.resonance)).real();
                obs.magnetization[q] += m.mu0 * pole.coupling * pole.coupling * ml;
            }
        }
    }
    return obs;
}

}  // namespace emq
