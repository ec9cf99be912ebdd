#pragma once

// Frozen reference values from an independent dense fixed-step RK4 run
// (Delta sigma = 1e-5, s_max = 50; see tools/oracle_gen.cpp).  The step-size
// study (1e-4 vs 1e-5) moves these by < 4e-12, so they carry ~1e-11 of
// certified accuracy.
namespace oracle {

// catenoid, n = 2, neck radius 1, neck on the height-1 horosphere
inline constexpr double catenoid_n2_r1_r_plus = 1.690614836372;
inline constexpr double catenoid_n2_r1_r_minus = 0.645446560996;

// grim reaper, n = 2, h0 = 1, initial slope lambda = 1
inline constexpr double grim_n2_l1_lambda_plus = 2.317302448381;
inline constexpr double grim_n2_l1_lambda_minus = 0.502169524549;

inline constexpr double certified_accuracy = 1e-11;

// first recorded time with sup|omega| < 0.01 in double-resolution (M = 800,
// cfl = 0.5, record_every = 0.05) reference runs of the standard perturbation
// suite; used as the golden decay horizons (with headroom) at M = 400
struct Horizon {
    const char* kind;
    double amplitude, width;
    double t_below_001;
};

// filled from the reference run before the acceptance suite was frozen
inline constexpr Horizon horizons[] = {
    { "gaussian-bump", +0.1, 0.078539816339744828, 0.15 },
    { "compact-bump", +0.1, 0.078539816339744828, 0.10 },
    { "gaussian-bump", -0.1, 0.078539816339744828, 0.15 },
    { "compact-bump", -0.1, 0.078539816339744828, 0.10 },
    { "gaussian-bump", +0.1, 0.31415926535897931, 0.75 },
    { "compact-bump", +0.1, 0.31415926535897931, 0.30 },
    { "gaussian-bump", -0.1, 0.31415926535897931, 0.75 },
    { "compact-bump", -0.1, 0.31415926535897931, 0.30 },
};

} // namespace oracle
