"""Physical constants (CODATA 2018) and the working unit system.

Working units: nm, meV, ps, T. SI values are kept alongside because the
Peierls phase is evaluated directly from e, B and hbar in SI.
"""

# SI, exact or CODATA 2018
ELEMENTARY_CHARGE = 1.602176634e-19  # C
PLANCK_SI = 6.62607015e-34  # J s
ELECTRON_MASS_SI = 9.1093837015e-31  # kg
VACUUM_PERMITTIVITY_SI = 8.8541878128e-12  # F / m
PI = 3.141592653589793
HBAR_SI = PLANCK_SI / (2 * PI)  # J s, exact with h

# conversions into working units
MEV = ELEMENTARY_CHARGE * 1e-3  # J per meV
NM = 1e-9  # m per nm
PS = 1e-12  # s per ps

HBAR = HBAR_SI / (MEV * PS)  # meV ps, = 0.6582119569...
FLUX_QUANTUM = PLANCK_SI / ELEMENTARY_CHARGE  # Wb (h/e)
# free electron mass in meV ps^2 / nm^2
ELECTRON_MASS = ELECTRON_MASS_SI * NM**2 / (MEV * PS**2)
# e^2 / (4 pi eps0) in meV nm, about 1439.96
COULOMB_CONSTANT = ELEMENTARY_CHARGE**2 / (4 * PI * VACUUM_PERMITTIVITY_SI) / (MEV * NM)

# GaAs, effective mass in units of m_e and relative permittivity
GAAS_EFFECTIVE_MASS = 0.067
GAAS_KAPPA = 13.1
