"""Print the localization-rate presets next to the reference orders of magnitude and write them to CSV."""
import argparse

from decoherence.scattering import preset_environments, write_preset_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="table1.csv")
    args = ap.parse_args()
    presets = preset_environments()
    print(f"{'environment':32s} {'a [cm]':>8s} {'computed':>10s} {'table':>8s} {'|dlog10|':>8s}  regime")
    for p in presets:
        print(f"{p.environment:32s} {p.size:8.0e} {p.lambda_computed:10.2e} {p.lambda_table:8.0e} "
              f"{p.log10_error:8.2f}  {p.regime}")
    write_preset_csv(args.out, presets)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
