"""Print the table of specific gradings of k^4 and the no-universal-cover
witnesses for the matrix, truncated and diagonal families."""
from gradpi.catalog import k4_table_report
from gradpi.pi1 import check_no_universal

if __name__ == "__main__":
    print(f"{'group':10s} trivial  others")
    for row in k4_table_report():
        g, t, o = row.as_list()
        print(f"{g:10s} {t:<8} {o}")
    print()
    for tag in ("M2", "M3", "trunc:3", "k4"):
        r = check_no_universal(tag)
        print(f"{tag:8s} {r.first} / {r.second}: {r.invariant} {r.values}")
