"""How large does the clock penalty need to be?

For each exponent e, the penalty is T^e. Prints lambda_min of the 3-local
Hamiltonian next to the reference value. For accepting circuits the 3-local
ground energy sits slightly below zero: hopping terms leak legal clock states
into illegal ones, and the penalty only suppresses this at second order.

    python scripts/penalty_sweep.py circuits/bell_accept_T4.circ
"""

import argparse
from pathlib import Path

from clockham.circuit import parse_circuit
from clockham.operators import assemble
from clockham.reduction import ReductionParams, build_3local, build_reference
from clockham.spectra import min_eigenvalue


def main():
    p = argparse.ArgumentParser()
    p.add_argument("circuit")
    p.add_argument("--exponents", type=int, nargs="+", default=list(range(1, 13)))
    args = p.parse_args()

    c = parse_circuit(Path(args.circuit).read_text())
    lam_ref = min_eigenvalue(build_reference(c)).lambda_min
    print(f"N={c.N} m={c.m} T={c.T}  lambda_min(reference) = {lam_ref:.12g}")
    print(f"{'e':>3} {'T^e':>12} {'lambda_min':>16} {'ref - lambda':>14} {'(ref-lam)*T^e':>14}")
    for e in args.exponents:
        penalty = float(c.T) ** e
        lam = min_eigenvalue(assemble(build_3local(c, ReductionParams(penalty_exponent=e)))).lambda_min
        print(f"{e:>3} {penalty:>12.4g} {lam:>16.10g} {lam_ref - lam:>14.4g} {(lam_ref - lam) * penalty:>14.4g}")


if __name__ == "__main__":
    main()
