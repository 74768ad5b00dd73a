"""Tabulate the soundness quantities for rejecting circuits of growing length.

The circuit swaps the |0> ancilla into the output qubit (p_max = 0) and then
pads with single-qubit gates on the ancilla wire.

    python scripts/soundness_table.py --max-T 7
"""

import argparse

from clockham.circuit import Circuit, Gate, optimal_acceptance
from clockham.reduction import ReductionParams
from clockham.verify import verify_soundness


def swap_circuit(T: int) -> Circuit:
    gates = [Gate.named("CNOT", 0, 1), Gate.named("CNOT", 1, 0)]
    pad = ["H", "S", "TG", "X"]
    gates += [Gate.named(pad[i % len(pad)], 1) for i in range(T - 2)]
    return Circuit(2, 1, gates)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-T", type=int, default=6)
    p.add_argument("--penalty-exponent", type=int, default=12)
    args = p.parse_args()

    params = ReductionParams(penalty_exponent=args.penalty_exponent)
    print(f"{'T':>3} {'p_max':>6} {'lam_ref':>12} {'lam_3local':>12} {'c_est':>9} {'slack':>10} {'sin2*T':>8}  verdict")
    for T in range(2, args.max_T + 1):
        c = swap_circuit(T)
        assert optimal_acceptance(c)[0] < 1e-12
        r = verify_soundness(c, 1e-3, params, f"swap{T}")
        print(f"{T:>3} {r.p_max:>6.3f} {r.lambda_min_reference:>12.6g} {r.lambda_min_3local:>12.6g} "
              f"{r.c_est:>9.4g} {r.chain_slack:>10.3g} {r.sin2_theta_T:>8.4f}  {r.verdict}")


if __name__ == "__main__":
    main()
