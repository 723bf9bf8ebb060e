#include "melscope/teleport.hpp"

#include <cmath>
#include <stdexcept>

namespace melscope {

namespace {

constexpr double kChannelTol = 1e-10;

void require_max_entangled(const StateVector& channel, int d) {
    if (channel.dims != std::vector<int>{d, d})
        throw std::invalid_argument("channel must live on d x d");
    const ComplexMatrix reduced = partial_trace(projector(channel), {d, d}, {0});
    ComplexMatrix target(d, d);
    for (int i = 0; i < d; ++i) target.at(i, i) = 1.0 / d;
    if (max_abs_diff(reduced, target) > kChannelTol)
        throw std::invalid_argument("channel is not maximally entangled");
}

ComplexMatrix entrywise_conj(const ComplexMatrix& m) {
    ComplexMatrix r = m;
    for (auto& e : r.entries) e = std::conj(e);
    return r;
}

}  // namespace

StateVector TeleportProtocol::measurement_state(int outcome) const {
    const ComplexMatrix op = kron(measurement_unitaries[outcome], ComplexMatrix::identity(d));
    return apply(op, reference_channel);
}

TeleportProtocol TeleportProtocol::create(int d, StateVector reference,
                                          std::vector<ComplexMatrix> measurement_unitaries,
                                          std::vector<ComplexMatrix> corrections) {
    if (d < 2) throw std::invalid_argument("protocol dimension must be >= 2");
    if (static_cast<int>(measurement_unitaries.size()) != d * d ||
        static_cast<int>(corrections.size()) != d * d)
        throw std::invalid_argument("protocol needs d^2 measurement unitaries and corrections");
    require_max_entangled(reference, d);

    TeleportProtocol p;
    p.d = d;
    p.reference_channel = std::move(reference);
    p.measurement_unitaries = std::move(measurement_unitaries);
    p.corrections = std::move(corrections);

    for (const auto& t : p.corrections)
        if (!is_unitary(t, 1e-12)) throw std::invalid_argument("correction is not unitary");

    std::vector<StateVector> basis;
    basis.reserve(d * d);
    for (int i = 0; i < d * d; ++i) basis.push_back(p.measurement_state(i));
    for (int i = 0; i < d * d; ++i) {
        for (int j = i; j < d * d; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(overlap(basis[i], basis[j]) - want) > 1e-10)
                throw std::invalid_argument("measurement states are not orthonormal");
        }
    }
    return p;
}

TeleportProtocol TeleportProtocol::from_reference_unitary(
    const ComplexMatrix& w, std::vector<ComplexMatrix> measurement_unitaries) {
    const int d = w.rows;
    const StateVector reference =
        apply(kron(w, ComplexMatrix::identity(d)), bell_state(BellIndex(d, 0, 0)));
    const ComplexMatrix w_conj = entrywise_conj(w);
    std::vector<ComplexMatrix> corrections;
    corrections.reserve(measurement_unitaries.size());
    for (const auto& wi : measurement_unitaries) corrections.push_back(wi * w * w_conj);
    return create(d, reference, std::move(measurement_unitaries), std::move(corrections));
}

TeleportProtocol standard_protocol(int d) {
    if (d < 2) throw std::invalid_argument("standard_protocol: d must be >= 2");
    std::vector<ComplexMatrix> units;
    units.reserve(d * d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) units.push_back(weyl_u(BellIndex(d, n, m)));
    std::vector<ComplexMatrix> corrections = units;
    return TeleportProtocol::create(d, bell_state(BellIndex(d, 0, 0)), std::move(units),
                                    std::move(corrections));
}

std::vector<OutcomeBranch> run_teleport(const TeleportProtocol& protocol,
                                        const StateVector& channel, const StateVector& probe) {
    const int d = protocol.d;
    require_max_entangled(channel, d);
    if (probe.dim() != d) throw std::invalid_argument("probe dimension mismatch");

    std::vector<OutcomeBranch> branches;
    branches.reserve(d * d);
    for (int i = 0; i < d * d; ++i) {
        const StateVector mu = protocol.measurement_state(i);
        // Project factors (0,1) of probe x channel onto mu; Bob keeps factor 2.
        std::vector<Complex> bob(d, Complex(0.0, 0.0));
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                const Complex w = std::conj(mu.amps[static_cast<size_t>(a) * d + b]) * probe.amps[a];
                if (w == 0.0) continue;
                for (int c = 0; c < d; ++c)
                    bob[c] += w * channel.amps[static_cast<size_t>(b) * d + c];
            }
        }
        const double nrm = norm(bob);
        OutcomeBranch br;
        br.outcome = i;
        br.probability = nrm * nrm;
        if (nrm < 1e-14)
            throw std::runtime_error("teleport branch collapsed to zero norm");
        for (auto& x : bob) x /= nrm;
        br.output = StateVector::create({d}, apply_raw(protocol.corrections[i], bob));
        branches.push_back(std::move(br));
    }

    double total = 0.0;
    for (const auto& b : branches) total += b.probability;
    if (std::abs(total - 1.0) > 1e-10)
        throw std::runtime_error("teleport branch probabilities do not sum to 1");
    return branches;
}

bool pure_output_check(const TeleportProtocol& protocol, const StateVector& channel,
                       const StateVector& probe) {
    const auto branches = run_teleport(protocol, channel, probe);
    for (size_t i = 0; i < branches.size(); ++i)
        for (size_t j = i + 1; j < branches.size(); ++j)
            if (overlap(branches[i].output, branches[j].output) < 1.0 - 1e-10) return false;
    return true;
}

BellIndex two_copy_discriminate(int d, const BellIndex& hidden) {
    if (hidden.d != d) throw std::invalid_argument("hidden index dimension mismatch");
    const TeleportProtocol protocol = standard_protocol(d);
    const StateVector channel = bell_state(hidden);

    const StateVector zero = StateVector::basis({d}, 0);
    std::vector<Complex> u(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    const StateVector uniform = StateVector::create({d}, std::move(u));

    const auto first = run_teleport(protocol, channel, zero);
    const auto second = run_teleport(protocol, channel, uniform);

    constexpr double kReadoutTol = 1e-9;

    bool have = false;
    BellIndex decoded;
    for (const auto& b1 : first) {
        // computational-basis readout of copy 1: must be deterministic
        int m = 0;
        double best = 0.0;
        for (int k = 0; k < d; ++k) {
            const double a = std::abs(b1.output.amps[k]);
            if (a > best) {
                best = a;
                m = k;
            }
        }
        if (best < 1.0 - kReadoutTol)
            throw std::runtime_error("copy-1 readout is not deterministic");

        for (const auto& b2 : second) {
            // copy-2 readout in the shifted Fourier family selected by m
            int n_found = -1;
            for (int n = 0; n < d; ++n) {
                std::vector<Complex> amps(d, Complex(0.0, 0.0));
                for (int j = 0; j < d; ++j) {
                    const double a = 6.283185307179586476925286766559 * j * n / d;
                    amps[(j + m) % d] =
                        Complex(std::cos(a), std::sin(a)) / std::sqrt(static_cast<double>(d));
                }
                const StateVector bn = StateVector::create({d}, std::move(amps));
                if (overlap(bn, b2.output) >= 1.0 - kReadoutTol) {
                    n_found = n;
                    break;
                }
            }
            if (n_found < 0)
                throw std::runtime_error("copy-2 readout is not deterministic");

            const BellIndex got(d, n_found, m);
            if (have && !(got == decoded))
                throw std::runtime_error("branch pairs decode inconsistently");
            decoded = got;
            have = true;
        }
    }
    return decoded;
}

}  // namespace melscope
