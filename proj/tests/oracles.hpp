#pragma once

// Frozen reference values. Closed forms were evaluated to 30 digits outside
// the library; spectra at sample points were frozen after agreeing with the
// eigenvalues of the full Jacobian to 2e-13.

namespace oracle
{

inline constexpr double omega_sq_g1_z05 = 3.99513499644335891443;
inline constexpr double gamma_star_zm05 = 0.99756749822167945722;
inline constexpr double existence_gamma = 1.02640047855933469246;
inline constexpr double unique_root_gamma = 0.57735026918962576451;
inline constexpr double g_max = 1.48722560494364808391;
inline constexpr double M0_z03 = -0.67039370078740157480;
inline constexpr double restricted_c_z03 = -1.72111912573421245817;

// Gamma = 1, z = 0.5: class E2CS2.
inline constexpr double roots_g1_z05[6][2] = {
    {-1.594231007165226, 0.0},
    {-1.107012385861988, 0.0},
    {-0.7017716330446253, 0.6153992247169061},
    {-0.7017716330446253, -0.6153992247169061},
    {-0.009573912710679675, 0.09309764614507229},
    {-0.009573912710679675, -0.09309764614507229},
};

// Published limit constants.
inline constexpr double z1 = 0.8299852976470169;
inline constexpr double z2 = 0.7318602978602651;
inline constexpr double z3 = 0.3702483631504248;
inline constexpr double z4 = -0.7389177458229170;
inline constexpr double z5 = -0.2839588732787964;

// Period of the rigid rotation at Gamma = 1, z = 0.5; one integrated period
// returns to the start within 4e-12.
inline constexpr double period_g1_z05 = 2.53343686884972;

} // namespace oracle
