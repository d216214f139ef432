#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "loopsoup/loops.hpp"
#include "loopsoup/weights.hpp"

namespace loopsoup {

/// Visits every current on n vertices with total edge mass exactly `mass`, in
/// a fixed deterministic order.
void for_each_current(int n, int mass, const std::function<void(const Current&)>& visit);
std::vector<Current> currents_of_mass(int n, int mass);
std::vector<Current> currents_up_to(int n, int max_mass);

/// prod_u n_u(C)! / prod_v C_uv!, exact integer arithmetic converted to double.
/// Throws kTooLarge above total mass 170.
double current_multiplicity(const Current& c);

/// nu_c{C} = det(I - Q) q(C) prod_u n_u(C)! / prod_v C_uv!.
Complex nu_c(const WeightMatrix& q, const Current& c);
/// Same, with det(I - Q) supplied by the caller.
Complex nu_c(const WeightMatrix& q, const Current& c, Complex det_i_minus_q);

/// nu_*{n'}: total current-field mass of the currents with local time n'.
Complex nu_star(const WeightMatrix& q, std::span<const std::int64_t> local_time);

/// Partial sum over currents of mass <= max_total plus a bound on the rest.
struct TruncatedSum {
  Complex value;
  int max_total = 0;
  double tail_bound = 0.0;
};

/// sum_{C : |C| <= M} nu_c{C}; the tail bound uses the |Q| series whose total
/// is det(I - |Q|)^{-1}.
TruncatedSum current_field_mass(const WeightMatrix& q, int max_total);

/// Density of the continuous occupation field at t:
///   det(I - Q) sum_C q(C) prod_u t_u^{n_u(C)} e^{-t_u} / prod_v C_uv!
/// truncated at total mass max_total. The tail bound is
///   |det(I - Q)| (F(t) - partial sum of moduli)
/// where F is the complete |Q| series, evaluated through its torus integral.
TruncatedSum occupation_density_series(const WeightMatrix& q, std::span<const double> t,
                                       int max_total);

}  // namespace loopsoup
