#!/usr/bin/env python3
"""Convert the raw Adult, German credit and COMPAS files into header CSVs.

usage: prepare_datasets.py --adult DIR --german DIR --compas DIR --out DIR

Adult: adult.data + adult.test merged, '?' written as an empty field.
German: german.data decoded to named columns plus a derived `sex` column.
COMPAS: compas-scores-two-years.csv with the usual screening filters
(|days_b_screening_arrest| <= 30, is_recid != -1, charge degree != O,
score_text present). All races are kept; the loader restricts them.
"""
import argparse
import csv
import os
from datetime import datetime

ADULT_COLS = ["age", "workclass", "fnlwgt", "education", "education_num",
              "marital_status", "occupation", "relationship", "race", "sex",
              "capital_gain", "capital_loss", "hours_per_week",
              "native_country", "income"]

GERMAN_COLS = ["checking_status", "duration", "credit_history", "purpose",
               "credit_amount", "savings", "employment", "installment_rate",
               "personal_status", "other_debtors", "residence_since",
               "property", "age", "other_installment_plans", "housing",
               "existing_credits", "job", "num_dependents", "telephone",
               "foreign_worker", "credit"]

COMPAS_COLS = ["sex", "age", "age_cat", "race", "juv_fel_count",
               "juv_misd_count", "juv_other_count", "priors_count",
               "c_charge_degree", "length_of_stay", "two_year_recid"]


def adult(src, dst):
    rows = []
    for name, skip in (("adult.data", 0), ("adult.test", 1)):
        with open(os.path.join(src, name)) as fh:
            for i, line in enumerate(fh):
                if i < skip or not line.strip():
                    continue
                vals = [v.strip() for v in line.strip().split(",")]
                if len(vals) != len(ADULT_COLS):
                    continue
                vals[-1] = vals[-1].rstrip(".")
                rows.append(["" if v == "?" else v for v in vals])
    with open(dst, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(ADULT_COLS)
        w.writerows(rows)
    return len(rows)


def german(src, dst):
    female = {"A92", "A95"}
    n = 0
    with open(os.path.join(src, "german.data")) as fh, \
            open(dst, "w", newline="") as out:
        w = csv.writer(out)
        w.writerow(GERMAN_COLS + ["sex"])
        for line in fh:
            vals = line.split()
            if len(vals) != len(GERMAN_COLS):
                continue
            vals[-1] = "good" if vals[-1] == "1" else "bad"
            w.writerow(vals + ["female" if vals[8] in female else "male"])
            n += 1
    return n


def compas(src, dst):
    fmt = "%Y-%m-%d %H:%M:%S"
    n = 0
    with open(os.path.join(src, "compas-scores-two-years.csv")) as fh, \
            open(dst, "w", newline="") as out:
        r = csv.DictReader(fh)
        w = csv.writer(out)
        w.writerow(COMPAS_COLS)
        for row in r:
            try:
                days = int(row["days_b_screening_arrest"])
            except ValueError:
                continue
            if abs(days) > 30 or row["is_recid"] == "-1":
                continue
            if row["c_charge_degree"] == "O" or row["score_text"] in ("", "N/A"):
                continue
            try:
                stay = (datetime.strptime(row["c_jail_out"], fmt)
                        - datetime.strptime(row["c_jail_in"], fmt)).days
            except ValueError:
                stay = ""
            w.writerow([row["sex"], row["age"], row["age_cat"], row["race"],
                        row["juv_fel_count"], row["juv_misd_count"],
                        row["juv_other_count"], row["priors_count"],
                        row["c_charge_degree"], stay, row["two_year_recid"]])
            n += 1
    return n


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--adult", required=True)
    ap.add_argument("--german", required=True)
    ap.add_argument("--compas", required=True)
    ap.add_argument("--out", required=True)
    a = ap.parse_args()
    os.makedirs(a.out, exist_ok=True)
    print("adult", adult(a.adult, os.path.join(a.out, "adult.csv")))
    print("german", german(a.german, os.path.join(a.out, "german.csv")))
    print("compas", compas(a.compas, os.path.join(a.out, "compas.csv")))


if __name__ == "__main__":
    main()
