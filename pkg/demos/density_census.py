"""The census itself: residue masses converging to the predicted densities.

Runs the weighted trace census for p = 3 up to a norm bound of 2*10^4 with
a few checkpoints and prints the folded residue masses next to the
closed-form predictions, then the total mass against x.
"""

from tracecensus import RunConfig, density_report, run_census

CHECKPOINTS = (200, 2000, 20000)


def main():
    res = run_census(RunConfig(p=3, norm_bounds=CHECKPOINTS))

    for i, x in enumerate(CHECKPOINTS):
        rep = density_report(res, checkpoint=i)
        print("x = %d (trace lines up to %d)" % (x, res.trace_bounds[i]))
        print("  a    psi_pm/x        predicted   rel err")
        for row in rep.rows:
            print(
                "  %-4d %-15.8f %-11s %.4f"
                % (row.a, row.empirical, row.predicted, row.rel_err)
            )
        print("  worst rel err: %.4f" % rep.max_rel_err())
        print()

    totals = res.psi_total()
    print("x        psi(x)            psi/x")
    for i, x in enumerate(CHECKPOINTS):
        print("%-8d %-17.6f %.6f" % (x, totals[i], totals[i] / x))


if __name__ == "__main__":
    main()
