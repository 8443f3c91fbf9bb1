"""Published reference values that the reproduction targets are checked
against, with the tolerance each verdict uses.

These constants are the single source of truth for `satgeo reproduce`; tests
compare freshly computed values against them.
"""

REFERENCE_VERSION = 1

# Modified-process heuristic density bound u_k = min_alpha u_k(alpha),
# rounded to two decimals; checked within +/- 0.01.
UK_TABLE = {3: 6.25, 4: 12.34, 5: 22.90, 6: 41.95, 7: 76.84}
UK_TOL = 0.01

# Empirical freezing threshold of the planted cluster (full process,
# alpha = 1), rounded to two decimals; Monte-Carlo runs are checked within
# 3% relative.
TK_TABLE = {3: 5.72, 4: 11.58, 5: 21.75, 6: 40.13, 7: 73.88}
TK_REL_TOL = 0.03

# Freezing-density optimization: k -> (c_k, alpha_m, mu, delta, zeta, epsilon).
# c_k is checked within 0.1% relative, the rest within 1e-3 absolute.
CK_TABLE = {
    9: (347.84, 0.265, 8.037, -0.015085, 1.7336, 0.02083),
    10: (690.48, 0.273, 6.935, -0.015714, 2.7134, 0.02194),
    11: (1370.42, 0.281, 6.256, -0.015789, 4.0330, 0.02229),
    12: (2720.44, 0.289, 5.802, -0.015548, 5.7977, 0.02220),
    13: (5402.23, 0.297, 5.480, -0.015132, 8.1457, 0.02184),
}
CK_REL_TOL = 1e-3
CK_PARAM_TOL = 1e-3

# Second-moment satisfiability lower bound at the same k, for display next to
# the c_k column.
RK_LOWER = {9: 349.92, 10: 704.94, 11: 1413.90, 12: 2833.12, 13: 5671.90}

# Sub-unit intervals of the pair rate at (k=8, r=169): crossings rounded to
# two decimals, upper interval closed at 1.  Verdicts use +/- 0.01 (two-decimal
# resolution).
FIG1_INTERVALS = ((0.06, 0.26), (0.68, 1.0))
FIG1_TOL = 0.01
FIG1_K = 8
FIG1_R = 169.0

# Spot values of the pair-rate upper bound w(alpha, k, gamma); tolerance is
# one unit in the last printed digit (the sources truncate).
W_SPOTS = (
    (1.0 / 9.0, 9, 0.985, -0.0451, 1e-4),
    (3.0 / 8.0, 9, 0.985, -0.000520265, 2e-9),
    (99.0 / 100.0, 8, 2.0 / 3.0, -0.0181019, 2e-7),
)

# Rescaled satisfiability lower bound at k=14, printed to 16 significant
# digits; checked to 5e-16 absolute.
TAU_14 = 0.9994711565304686
TAU_14_TOL = 5e-16

# Below/above points bracketing the k=9 critical density at alpha = 0.265:
# the stationary margin B is positive at the first two, negative at the last.
K9_BRACKET_POSITIVE = (347.0, 347.5)
K9_BRACKET_NEGATIVE = (348.0,)
K9_ALPHA = 0.265

# Published satisfiability-threshold bounds, stored for display only.
# k -> (best upper bound, best lower bound, best algorithmic lower bound)
KNOWN_SAT_BOUNDS = {
    3: (4.508, 3.52, 3.52),
    4: (10.23, 7.91, 5.54),
    7: (87.88, 84.82, 33.23),
    10: (708.94, 704.94, 172.65),
    20: (726817.0, 726809.0, 95263.0),
    21: (1453635.0, 1453626.0, 181453.0),
}
# k -> (lower, upper) threshold bounds displayed beside the t_k/u_k rows
KNOWN_SAT_BOUNDS_SMALLK = {
    3: (3.52, 4.51), 4: (7.91, 10.23), 5: (18.79, 21.33),
    6: (40.62, 43.51), 7: (84.82, 87.88),
}

# Monte-Carlo bisection brackets for the t_k runs (straddle the transition
# with wide margin at n = 1e5).
TK_BRACKETS = {3: (4.0, 8.0), 4: (9.0, 15.0), 5: (17.0, 27.0),
               6: (32.0, 48.0), 7: (60.0, 90.0)}
