#!/usr/bin/env python3
"""Materialize the bundled medical datasets as plain CSV files under data/.

Each file is fetched from the UCI repository when it is reachable. Otherwise
the script falls back to copies shipped inside well-known Python packages
(keel-ds, pydataset, scikit-learn), fetched with `pip download`.

Output layout (matches datasets.toml):
  pima.csv           8 attributes + outcome (0/1)
  breast_cancer.csv  id + 9 attributes + class (2/4), '?' marks missing values
  heart.csv          13 attributes + class (1/2)
  lymphography.csv   class + 18 attributes (UCI only, no fallback)
  wdbc.csv           30 attributes + diagnosis (M/B)
"""

import csv
import io
import subprocess
import sys
import tempfile
import urllib.request
import zipfile
import tarfile
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"
OUT = Path(__file__).resolve().parent.parent / "data"


def fetch_url(url):
    try:
        with urllib.request.urlopen(url, timeout=10) as resp:
            return resp.read().decode()
    except Exception:
        return None


def pip_fetch(package, workdir):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q", package, "-d", str(workdir)],
        check=True,
    )
    name = package.replace("-", "_").lower()
    for p in Path(workdir).iterdir():
        if p.name.lower().replace("-", "_").startswith(name):
            return p
    raise FileNotFoundError(package)


def keel_rows(wheel, name):
    text = zipfile.ZipFile(wheel).read(f"keel_ds/data/balanced/raw/{name}.dat").decode()
    return [l.strip().split(",") for l in text.splitlines() if l.strip() and not l.startswith("@")]


def write(name, rows, header=None):
    path = OUT / name
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        if header:
            w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main():
    OUT.mkdir(exist_ok=True)
    work = Path(tempfile.mkdtemp())
    keel = None

    def keel_wheel():
        nonlocal keel
        if keel is None:
            keel = pip_fetch("keel-ds", work)
        return keel

    # Pima Indians Diabetes
    text = fetch_url("https://raw.githubusercontent.com/jbrownlee/Datasets/master/pima-indians-diabetes.data.csv")
    if text:
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
    else:
        rows = keel_rows(keel_wheel(), "pima")
        for r in rows:
            r[-1] = "1" if r[-1] == "tested_positive" else "0"
    write("pima.csv", rows)

    # Breast Cancer Wisconsin (original), 699 rows with 16 missing Bare Nuclei
    text = fetch_url(f"{UCI}/breast-cancer-wisconsin/breast-cancer-wisconsin.data")
    if text:
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
    else:
        sdist = pip_fetch("pydataset", work)
        with tarfile.open(sdist) as outer:
            member = next(m for m in outer.getmembers() if m.name.endswith("resources.tar.gz"))
            inner = tarfile.open(fileobj=outer.extractfile(member))
            raw = inner.extractfile("resources/rdata/csv/MASS/biopsy.csv").read().decode()
        rows = []
        for r in list(csv.reader(io.StringIO(raw)))[1:]:
            attrs = ["?" if v == "NA" else v for v in r[2:11]]
            cls = "2" if r[11] == "benign" else "4"
            rows.append([r[1]] + attrs + [cls])
    write("breast_cancer.csv", rows)

    # Statlog Heart
    text = fetch_url(f"{UCI}/statlog/heart/heart.dat")
    if text:
        rows = [l.split() for l in text.splitlines() if l.strip()]
    else:
        rows = keel_rows(keel_wheel(), "heart")
    write("heart.csv", rows)

    # Lymphography
    text = fetch_url(f"{UCI}/lymphography/lymphography.data")
    if text:
        write("lymphography.csv", [r for r in csv.reader(io.StringIO(text)) if r])
    else:
        print("lymphography: UCI unreachable and no packaged copy exists; "
              "place lymphography.data at data/lymphography.csv manually", file=sys.stderr)

    # Breast Cancer Wisconsin (diagnostic)
    text = fetch_url(f"{UCI}/breast-cancer-wisconsin/wdbc.data")
    if text:
        rows = [r[2:] + [r[1]] for r in csv.reader(io.StringIO(text)) if r]
    else:
        import sklearn

        src = Path(sklearn.__file__).parent / "datasets" / "data" / "breast_cancer.csv"
        body = list(csv.reader(open(src)))[1:]
        rows = [r[:-1] + ["M" if r[-1] == "0" else "B"] for r in body]
    write("wdbc.csv", rows)


if __name__ == "__main__":
    main()
