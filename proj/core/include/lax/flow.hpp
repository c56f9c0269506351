#pragma once

#include "lax/moper.hpp"

namespace lax {

// Dynamical state: the Lax coefficients plus the moving Tyurin data
// (positions and conjugators) carried by the current configuration.
struct FlowState {
  ConfigPtr cfg;
  LaxElement l;
  double t = 0;
};

FlowState initial_state(const LaxElement& l);

struct StateDeriv {
  Vector lcoeff;  // packed LaxElement layout
  std::vector<Complex> zdot;
  std::vector<Matrix> gdot;
  double reexpansion_residual = 0;  // defect of the transported pole orders
};

// L-dot = [L, M_a] re-expanded about the moving poles; z_g-dot = nu_g;
// g_g-dot = -M_0^g g_g (one lift of h_g-dot = [h_g, M_0^g]).
StateDeriv rhs(const FlowState& s, const FlowTriple& a, double tol = 1e-6);

// Euler update used as the RK building block; rebuilds the configuration
// around the moved poles without validation (mid-stage conjugators drift
// off the group until the end-of-step projection).
FlowState advance(const FlowState& s, const StateDeriv& d, double dt);
FlowState project_group_state(const FlowState& s);

struct FlowDiagnostics {
  struct Checkpoint {
    double t = 0;
    double r_drift = 0;        // max relative drift of r_j over sample points
    double membership = 0;     // worst algebra-membership residual of coefficients
    double tyurin_form = 0;    // worst check_tyurin_form over gamma
    double h_spectrum_drift = 0;  // eigenvalues of h_gamma vs their integers
    long steps = 0;
  };
  std::vector<Checkpoint> checkpoints;
  long steps = 0;
  double dt_min = 0, dt_max = 0;
};

// Classical RK4.  tol > 0 enables step-doubling control with per-step
// defect below tol; tol <= 0 integrates with the fixed step dt.
FlowState integrate(FlowState s, const FlowTriple& a, double t_end, double dt,
                    double tol = 0, FlowDiagnostics* diag = nullptr,
                    int n_checkpoints = 10);

// || phi_{a1}^t phi_{a2}^t - phi_{a2}^t phi_{a1}^t || over coefficients,
// z_g and h_g, quotiented by the global conjugation gauge.
double commutation_check(const FlowState& s0, const FlowTriple& a1, const FlowTriple& a2,
                         double t, double dt);

}  // namespace lax
