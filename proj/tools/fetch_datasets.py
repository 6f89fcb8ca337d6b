#!/usr/bin/env python3
# Copyright 2026 The robustats Authors
# SPDX-License-Identifier: Apache-2.0

"""Regenerate the bundled dataset CSVs from their public sources.

The robustbase sets come from the rdatasets package on PyPI; TopGear and
data_glass are read from the CRAN source tarballs of robustHD and cellWise.
Requires pandas, rdatasets and pyreadr. Checksums are compared against
data/manifest.json; pass --update-manifest to rewrite them instead.
"""

import argparse
import csv
import hashlib
import io
import json
import pathlib
import sys
import tarfile
import tempfile
import urllib.request

import pandas as pd

CRAN = "https://cloud.r-project.org/src/contrib/"


def from_rdatasets(package, name):
    import rdatasets

    return rdatasets.data(package, name)


def from_cran(package, member):
    import pyreadr

    index = urllib.request.urlopen(CRAN).read().decode()
    start = index.index(f'href="{package}_') + len('href="')
    tarball = index[start : index.index('"', start)]
    blob = urllib.request.urlopen(CRAN + tarball).read()
    with tarfile.open(fileobj=io.BytesIO(blob)) as tar:
        data = tar.extractfile(f"{package}/data/{member}").read()
    with tempfile.NamedTemporaryFile(suffix=pathlib.Path(member).suffix) as tmp:
        tmp.write(data)
        tmp.flush()
        return next(iter(pyreadr.read_r(tmp.name).values()))


def telephone():
    df = from_rdatasets("robustbase", "telef")
    return pd.DataFrame({"Year": df["Year"].astype(int), "Calls": df["Calls"]})


def stars():
    df = from_rdatasets("robustbase", "starsCYG")
    return df[["log.Te", "log.light"]].set_axis(["Te", "light"], axis=1)


def animals():
    df = from_rdatasets("robustbase", "Animals2")
    return df[["rownames", "body", "brain"]].rename(columns={"rownames": "species"})


def topgear():
    return from_cran("robustHD", "TopGear.RData").reset_index(drop=True)


def glass():
    df = from_cran("cellWise", "data_glass.rda")
    return df.set_axis([f"V{j + 1}" for j in range(df.shape[1])], axis=1)


BUILDERS = {"telephone": telephone, "stars": stars, "animals": animals, "topgear": topgear, "glass": glass}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", default=pathlib.Path(__file__).resolve().parent.parent / "data", type=pathlib.Path)
    parser.add_argument("--only", nargs="*", choices=sorted(BUILDERS))
    parser.add_argument("--update-manifest", action="store_true")
    args = parser.parse_args()

    manifest_path = args.data_dir / "manifest.json"
    manifest = json.loads(manifest_path.read_text())
    status = 0
    for entry in manifest["datasets"]:
        if args.only and entry["name"] not in args.only:
            continue
        df = BUILDERS[entry["name"]]()
        text = df.to_csv(index=False, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\r\n", na_rep="NA")
        text = text.replace('"NA"', "NA")
        digest = hashlib.sha256(text.encode()).hexdigest()
        (args.data_dir / entry["file"]).write_bytes(text.encode())
        if (len(df), df.shape[1] - (1 if "label_column" in entry else 0)) != (entry["n"], entry["p"]):
            print(f"{entry['name']}: shape {df.shape} does not match manifest", file=sys.stderr)
            status = 1
        if digest != entry["sha256"]:
            if args.update_manifest:
                entry["sha256"] = digest
            else:
                print(f"{entry['name']}: checksum {digest} differs from manifest", file=sys.stderr)
                status = 1
        print(f"{entry['name']}: wrote {entry['file']} ({len(df)} rows)")
    if args.update_manifest:
        manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
