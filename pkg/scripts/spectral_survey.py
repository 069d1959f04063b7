"""
Spectral Survey for the Δⁿ Dirichlet Operator

Tabulates the embedding constants λ and λ_max of DᵀD for a range of sizes
and orders, next to the 4ⁿ upper bound and, for n = 1, the closed form
4 sin²(π / (2(N+1))).

    python scripts/spectral_survey.py [--max-N 50] [--max-order 3] [--csv out.csv]
"""

import argparse
from pathlib import Path
import sys

import numpy as np
import pandas as pd

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.difference_calculus import dirichlet_lambda_min, embedding_constants


def survey(max_N: int, max_order: int) -> pd.DataFrame:
    rows = []
    for n in range(1, max_order + 1):
        for N in range(2, max_N + 1):
            bounds = embedding_constants(N, n)
            rows.append({
                'n': n,
                'N': N,
                'lambda': bounds.lambda_min,
                'lambda_max': bounds.lambda_max,
                'bound': bounds.upper_bound,
                'analytic': dirichlet_lambda_min(N) if n == 1 else np.nan,
            })
    df = pd.DataFrame(rows)
    df['analytic_error'] = (df['lambda'] - df['analytic']).abs()
    df['bound_gap'] = df['bound'] - df['lambda_max']
    return df


def print_summary(df: pd.DataFrame) -> None:
    print("=" * 80)
    print("SPECTRAL SURVEY: extreme eigenvalues of DᵀD")
    print("=" * 80)
    for n, group in df.groupby('n'):
        print(f"\nOrder n={n} ({len(group)} sizes, N={group['N'].min()}..{group['N'].max()})")
        print(f"  λ range:          {group['lambda'].min():.6e} .. {group['lambda'].max():.6e}")
        print(f"  λ_max range:      {group['lambda_max'].min():.6f} .. {group['lambda_max'].max():.6f}")
        print(f"  smallest 4ⁿ gap:  {group['bound_gap'].min():.3e}")
        if n == 1:
            print(f"  max |λ - closed form|: {group['analytic_error'].max():.3e}")


def main():
    parser = argparse.ArgumentParser(description="Tabulate embedding constants of the Δⁿ operator")
    parser.add_argument("--max-N", type=int, default=50, help="Largest interior size")
    parser.add_argument("--max-order", type=int, default=3, help="Largest order n")
    parser.add_argument("--csv", type=Path, help="Write the full table to a CSV file")
    args = parser.parse_args()

    df = survey(args.max_N, args.max_order)
    print_summary(df)
    if args.csv is not None:
        df.to_csv(args.csv, index=False)
        print(f"\nTable written to: {args.csv}")


if __name__ == "__main__":
    main()
