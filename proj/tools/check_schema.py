#!/usr/bin/env python3
"""Validates case files against schema/case.schema.json.

Usage: check_schema.py SCHEMA CASE [CASE ...]
Also checks that an unknown key is rejected, mirroring the loader.
"""
import copy
import json
import sys

import jsonschema


def main(argv):
    if len(argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    with open(argv[1]) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    validator.check_schema(schema)
    failed = 0
    for path in argv[2:]:
        with open(path) as f:
            doc = json.load(f)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors:
            print(f"{path}: {'/'.join(map(str, e.path))}: {e.message}")
        bad = copy.deepcopy(doc)
        bad["network"]["unexpected"] = 1
        if validator.is_valid(bad):
            print(f"{path}: unknown key was accepted")
            errors.append(None)
        failed += bool(errors)
        print(f"{'ok' if not errors else 'FAIL'} {path}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
