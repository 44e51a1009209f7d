"""Where sampling stops working.

Sweeping the lattice spacing shows the lower frame bound collapsing once
there are fewer functionals than spectral nodes; the solver then refuses
to invert.
"""

from pwframes import (
    FrameNotCertifiedError,
    Interval,
    build_fourier_model,
    build_frame,
    build_lattice,
    make_functional_family,
    plancherel_polya_report,
    reconstruct,
)

model = build_fourier_model(1.0, 16)
print(f"{'rho':>5} {'J':>4} {'A':>10} {'B':>8} {'B/A':>8}  certified")
for rho in (0.2, 0.3, 0.4, 0.5, 0.6, 0.8):
    frame = build_frame(make_functional_family(build_lattice(Interval(-4, 4), rho)), model)
    ratio = frame.B / frame.A if frame.A > 0 else float("inf")
    print(f"{rho:5.2f} {len(frame):4d} {frame.A:10.3e} {frame.B:8.3f} {ratio:8.2f}  {frame.certified}")

frame = build_frame(make_functional_family(build_lattice(Interval(-4, 4), 0.3)), model)
pp = plancherel_polya_report(frame, trials=200)
print(f"\nrho=0.3: sample energy of unit-norm f ranges over [{pp.A_emp:.3f}, {pp.B_emp:.3f}] "
      f"inside [{pp.A:.3f}, {pp.B:.3f}]; noise gain {pp.noise_gain:.3f} (bound {pp.gain_bound:.3f})")

sparse = build_frame(make_functional_family(build_lattice(Interval(-4, 4), 0.8)), model)
try:
    reconstruct(sparse, [0.0] * len(sparse))
except FrameNotCertifiedError as exc:
    print(f"rho=0.8: {exc}")
