#pragma once

#include <vector>

#include "melscope/linalg.hpp"
#include "melscope/weyl.hpp"

namespace melscope {

/// Exact teleportation protocol: reference channel, measurement basis
/// {(measurement_unitaries[i] x I) reference} and Bob's per-outcome correction.
struct TeleportProtocol {
    int d = 2;
    StateVector reference_channel;               // dims [d, d]
    std::vector<ComplexMatrix> measurement_unitaries;  // d*d of them
    std::vector<ComplexMatrix> corrections;            // outcome -> Bob unitary

    /// Checked constructor: measurement states pairwise orthonormal (1e-10),
    /// corrections unitary (1e-12).
    static TeleportProtocol create(int d, StateVector reference,
                                   std::vector<ComplexMatrix> measurement_unitaries,
                                   std::vector<ComplexMatrix> corrections);

    /// Protocol on reference (W x I) Psi_00 with measurement unitaries W_i and
    /// corrections W_i W W^* (entrywise conjugate in the computational basis).
    static TeleportProtocol from_reference_unitary(const ComplexMatrix& w,
                                                   std::vector<ComplexMatrix> measurement_unitaries);

    StateVector measurement_state(int outcome) const;
};

/// Standard protocol: reference Psi_00, measurements U_nm in row-major
/// (n, m) order, correction U_nm.
TeleportProtocol standard_protocol(int d);

struct OutcomeBranch {
    int outcome = 0;
    double probability = 0.0;
    StateVector output;  // dim d, correction already applied
};

/// All d^2 measurement branches by explicit three-factor state evolution.
/// The channel must be maximally entangled (reduced density I/d within 1e-10).
std::vector<OutcomeBranch> run_teleport(const TeleportProtocol& protocol,
                                        const StateVector& channel,
                                        const StateVector& probe);

/// True iff every pair of branch outputs has fidelity >= 1 - 1e-10.
bool pure_output_check(const TeleportProtocol& protocol, const StateVector& channel,
                       const StateVector& probe);

/// Two-copy discrimination: teleports |0> and the uniform superposition through
/// the hidden channel via the standard protocol, decodes (n, m) from Bob's two
/// measurements, and checks that every one of the d^4 branch pairs agrees.
BellIndex two_copy_discriminate(int d, const BellIndex& hidden);

}  // namespace melscope
