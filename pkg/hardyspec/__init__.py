'''
Numerical Clifford harmonic analysis on periodic grids.

Hardy-space projections, Riesz and Hilbert transforms, monogenic extensions into the
upper half-space and the Bergman representation, with a verification suite that checks
the underlying identities as discrete operator identities.
'''
