#!/usr/bin/env python3
"""Complete-case filter for the NCCTG lung cancer data.

Reads data/ncctg_lung.csv (228 patients; time in days, status 1=censored
2=dead, plus baseline covariates) and writes data/ncctg_lung_cc.csv keeping
the rows with non-missing age, sex and ph.ecog. The model columns are kept
as-is; the filtered file has 227 rows, 63 of them right-censored.
"""
import csv
import pathlib
import sys

root = pathlib.Path(__file__).resolve().parent.parent
src = root / "data" / "ncctg_lung.csv"
dst = root / "data" / "ncctg_lung_cc.csv"

with open(src, newline="") as f:
    reader = csv.DictReader(f)
    rows = [r for r in reader if all(r[c] not in ("", "NA") for c in ("age", "sex", "ph.ecog"))]
    header = reader.fieldnames

if len(rows) != 227:
    sys.exit(f"expected 227 complete cases, found {len(rows)}")
censored = sum(1 for r in rows if r["status"] == "1")
if censored != 63:
    sys.exit(f"expected 63 right-censored cases, found {censored}")

with open(dst, "w", newline="") as f:
    w = csv.DictWriter(f, fieldnames=header)
    w.writeheader()
    w.writerows(rows)
print(f"wrote {dst} ({len(rows)} rows, {censored} censored)")
