"""Frozen reference values.

Each number was computed once from a closed form written independently of the
package (CODATA 2018 CGS constants at their published ten digits, so agreement is
expected to about 1e-9 relative) and pasted here; tests compare against the
literals, never against a recomputation through library code.
"""
import math

# m k_B T dx^2 / hbar^2 for m = 1 g, T = 300 K, dx = 1 cm, and hbar / sqrt(m k_B T)
RATIO_1G_300K_1CM = 3.7243648207755894e40
LAMBDA_TH_1G_300K_CM = 5.181719408331772e-21

# air at 1 atm, 300 K, L = 1 cm, t = 1 s
GRAVITY_RATE_AIR = 1906257.0965335832
GRAVITY_DG_REL_AIR = 7.385647699961292e-07

# cos^(2N)(pi / (2N)): survival of |0> under V sigma_x, V t = pi/2, N checks
ZENO_COS_POWER = {
    1: 3.749399456654644e-33,
    2: 0.25000000000000006,
    10: 0.7805460697811408,
    100: 0.9756269141438981,
}

# long-wavelength thermal-photon rate 8 8! zeta(9) c a^6 k_th^9 / (9 pi)
PHOTON_CMB_1E3 = 1640161.1489954453
# air molecules, a = 1e-3 cm: (m v / hbar)^2 n v pi a^2, v = sqrt(8 k T / pi m)
AIR_1E3 = 1.6418194639573246e37

# even cat |<alpha|-alpha>| = exp(-2 |alpha|^2)
def coherent_overlap_modulus(alpha):
    return math.exp(-2 * abs(alpha) ** 2)
