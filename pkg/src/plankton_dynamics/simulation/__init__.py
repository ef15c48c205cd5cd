# Orbits, bifurcation sweeps and Lyapunov exponents
