#!/usr/bin/env python3
# Copyright 2026 The osmheight Authors
# SPDX-License-Identifier: Apache-2.0
"""Validate CityJSON files against the official 1.1 schemas.

Exit status: 0 valid, 1 invalid, 2 validator unavailable or unreadable file.
"""

import argparse
import json
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("files", nargs="+")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args()
    try:
        import cjvalpy
    except ImportError:
        print("cjvalpy is not installed (pip install cjvalpy)", file=sys.stderr)
        return 2

    status = 0
    for path in args.files:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
            json.loads(text)
        except (OSError, ValueError) as exc:
            print(f"{path}: unreadable: {exc}", file=sys.stderr)
            return 2
        report = cjvalpy.CJValidator([text]).validate()
        ok = "File is valid" in report
        if not args.quiet or not ok:
            print(report)
        print(f"{path}: {'valid' if ok else 'INVALID'}")
        if not ok:
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
