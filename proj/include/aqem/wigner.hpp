#pragma once

namespace aqem {

/// Index of a reduced rotation matrix element d^j_{m,m'}(beta).
///
/// Spins are stored doubled (two_j = 2j, ...) so half-integers stay exact.
/// Valid when two_j >= 0, |two_m| <= two_j, |two_mprime| <= two_j and all three
/// share the parity of two_j.
struct WignerIndex {
    int two_j = 0;
    int two_m = 0;
    int two_mprime = 0;
    double beta = 0.0;
};

/// True when idx satisfies the invariants above (beta is unconstrained).
bool is_valid(const WignerIndex& idx);

/// d^j_{m,m'}(beta) = <j m| exp(-i beta J_y) |j m'>, first index the row.
///
/// Evaluated through the Jacobi-polynomial form
///   d = (-1)^lambda sqrt(C(2j-k, k+a) / C(k+b, b)) sin^a(beta/2) cos^b(beta/2) P_k^(a,b)(cos beta)
/// with the three-term recurrence in k. The recurrence stays accurate to
/// j = 128, where the alternating factorial sum would have cancelled away.
///
/// Throws DomainError for an invalid index.
double wigner_d(const WignerIndex& idx);

}  // namespace aqem
