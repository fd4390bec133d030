"""Physical constants in the simulation unit system (nm, fs, eV)."""

# Reduced Planck constant [eV fs]
HBAR = 0.6582119569

# Boltzmann constant [eV/K]
KB = 8.617333e-5

# Free electron mass [eV fs^2 nm^-2], from m_e c^2 = 510998.95 eV and
# c = 299.792458 nm/fs.
SPEED_OF_LIGHT = 299.792458
ELECTRON_MASS = 510998.95 / SPEED_OF_LIGHT**2

# 1e6 m/s expressed in nm/fs (handy for Fermi velocities quoted in m/s).
MEGAMETER_PER_SECOND = 1.0


def kelvin_to_ev(temperature: float) -> float:
    """Thermal energy k_B*T in eV for a temperature in K."""
    return KB * temperature
