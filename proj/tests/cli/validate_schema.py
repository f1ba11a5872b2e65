"""Run a curlmat command and validate its JSON output against a schema.

usage: validate_schema.py SCHEMA (--ctf FILE | -- COMMAND...)
"""
import json
import pathlib
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    resources = []
    for path in schema_dir.glob("*.schema.json"):
        resources.append((path.name, Resource.from_contents(json.loads(path.read_text()))))
    return Registry().with_resources(resources)


def main(argv):
    schema_path = pathlib.Path(argv[1])
    schema = json.loads(schema_path.read_text())
    if argv[2] == "--ctf":
        with open(argv[3], "rb") as fh:
            document = json.loads(fh.readline())
    else:
        cmd = argv[argv.index("--") + 1:]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        if proc.returncode != 0:
            print(proc.stdout, proc.stderr, file=sys.stderr)
            return 1
        document = json.loads(proc.stdout)
    validator = jsonschema.Draft202012Validator(schema, registry=load_registry(schema_path.parent))
    errors = list(validator.iter_errors(document))
    for err in errors:
        print(f"{list(err.path)}: {err.message}", file=sys.stderr)
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
