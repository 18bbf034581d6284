"""Fourth-order integrals of motion for potentials separable in Cartesian coordinates."""
