"""Runs the CLI and validates its JSON outputs against the schemas in docs/."""
import json
import pathlib
import subprocess
import sys

import jsonschema

binary, docs, scratch = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])


def schema(name):
    return json.loads((docs / name).read_text())


def load(path):
    return json.loads(path.read_text())


failures = 0


def validate(doc, name, label):
    global failures
    try:
        jsonschema.validate(doc, schema(name))
        print(f"ok   {label}")
    except jsonschema.ValidationError as e:
        failures += 1
        print(f"FAIL {label}: {e.message}")


for sub, extra in [("check", []), ("fk", []), ("idyn", []), ("fdyn", ["--duration", "0.05"])]:
    out = scratch / sub
    rc = subprocess.run([binary, sub, "--out", str(out), *extra], capture_output=True).returncode
    if rc not in (0, 1):
        failures += 1
        print(f"FAIL {sub}: exit code {rc}")
        continue
    validate(load(out / "manifest.json"), "manifest.schema.json", f"{sub}/manifest.json")
    if sub == "check":
        validate(load(out / "check_report.json"), "check_report.schema.json", "check/check_report.json")
    if sub == "idyn":
        validate(load(out / "torques_summary.json"), "torques_summary.schema.json", "idyn/torques_summary.json")

# a failing report must still conform
fault = scratch / "fault.json"
fault.parent.mkdir(parents=True, exist_ok=True)
fault.write_text(json.dumps({"fault_injection": {"revert_corrections": ["x-angle-B"]}}))
subprocess.run([binary, "check", "--config", str(fault), "--out", str(scratch / "fault")], capture_output=True)
validate(load(scratch / "fault" / "check_report.json"), "check_report.schema.json", "fault/check_report.json")

sys.exit(1 if failures else 0)
