"""Shared tuning constants for the numeric core.

Both the numpy fallback and the compiled extension read their branch cuts,
iteration counts and anchor values from here so that the two backends run
the same algorithm with the same parameters.
"""

import numpy as np

SQRT_PI = 1.7724538509055160273
TWO_OVER_SQRT_PI = 1.1283791670955125739
INV_PI = 0.3183098861837906715

# erf: Maclaurin series below ERF_SERIES_CUT, continued fraction for the
# complement up to ERF_ONE_CUT, exactly 1 beyond (erfc < 4e-20 there).
# The backward CF evaluation needs rapidly decreasing depth as x grows
# (34 terms suffice at x = 2 for 5e-15); breakpoints carry ~2x margin.
ERF_SERIES_CUT = 2.0
ERF_ONE_CUT = 6.5
ERF_SERIES_TERMS = 64
ERF_SERIES_BREAKS = ((1.0, 26), (1.5, 34), (2.0, 44))
ERF_CF_BREAKS = ((2.5, 64), (3.0, 40), (4.0, 24), (float("inf"), 12))

# Dawson: Maclaurin series below DAW_SERIES_CUT, exponentially convergent
# sampling sum (step DAW_H) in the midrange, asymptotic series beyond
# DAW_ASYM_CUT.  The sampling sum has a theoretical floor of
# exp(-(pi/(2h))^2) ~ 7e-18 at h = 0.25.
DAW_SERIES_CUT = 0.25
DAW_SERIES_TERMS = 12
DAW_ASYM_CUT = 6.5
DAW_ASYM_TERMS = 24
DAW_H = 0.25
DAW_NMAX = 13
DAW_COEFFS = np.exp(-(np.arange(1, 2 * DAW_NMAX, 2, dtype=np.float64) * DAW_H) ** 2)

# K2(u) = (2/pi) * integral of the Dawson function over [0, u]:
# alternating power series on [0, 4], Gauss-Legendre panel from the u = 4
# anchor on (4, 8], anchor at u = 8 plus the integrated asymptotic tail of
# the Dawson function beyond.  Anchor values carry 19 significant digits
# and are re-derived against adaptive quadrature in the test suite.
K2_SERIES_CUT = 4.0
K2_SERIES_TERMS = 80
K2_SERIES_BREAKS = ((1.5, 30), (2.5, 46), (3.25, 62), (4.0, 80))
K2_TAIL_CUT = 8.0
K2_AT_4 = 0.7485372049665086029
K2_AT_8 = 0.9731507618838490518
K2_GL_NODES, K2_GL_WEIGHTS = np.polynomial.legendre.leggauss(48)

# Antiderivative of the Dawson asymptotic series minus the leading log:
#   int D(y) dy = (1/2) ln y - sum_k TAIL_COEFFS[k] * y^(-2(k+1))
K2_TAIL_COEFFS = np.array(
    [
        1.0 / 8.0,
        3.0 / 32.0,
        15.0 / 96.0,
        105.0 / 256.0,
        945.0 / 640.0,
        10395.0 / 1536.0,
        135135.0 / 3584.0,
        2027025.0 / 8192.0,
    ]
)
