"""End-to-end checks of the ddsim command line tool.

Usage: python3 cli_test.py /path/to/ddsim
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile

BIN = sys.argv[1]

PASS = 0
FAIL = 0


def check(name, cond, detail=""):
    global PASS, FAIL
    if cond:
        PASS += 1
        print(f"ok   {name}")
    else:
        FAIL += 1
        print(f"FAIL {name} {detail}")


def run(*args, env=None):
    e = os.environ.copy()
    if env:
        e.update(env)
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=e)


def write_config(path, text):
    with open(path, "w") as f:
        f.write(text)


SIM_CONFIG = """
[sequence]
kind = cpmg
tau_us = 16000

[pulse]
mode = delta
epsilon = 0.001

[noise]
preset = calibrated

[run]
duration_ms = 500
ensemble = 40
dt_ms = 5
seed = 11
threads = 2

[output]
dir = {out}
"""

SCAN_CONFIG = """
[sequence]
kind = cpmg
tau_us = 1000

[noise]
preset = calibrated

[run]
duration_ms = 300
ensemble = 30
dt_ms = 5
seed = 3
threads = 2

[scan]
tau_us = 4000, 8000
sequences = cpmg, xy4s, xy8s
model = single

[output]
dir = {out}
"""


def main():
    tmp = tempfile.mkdtemp(prefix="ddsim_cli_")
    try:
        # help and flag handling
        r = run("--help")
        check("--help exits 0", r.returncode == 0)
        r = run("simulate", "--frobnicate")
        check("unknown flag exits nonzero", r.returncode != 0)
        r = run()
        check("missing subcommand exits nonzero", r.returncode != 0)

        # config validation: unknown sequence name names the field, exit 2
        bad = os.path.join(tmp, "bad.cfg")
        write_config(bad, "[sequence]\nkind = nonsense\n")
        r = run("simulate", "-c", bad)
        check("invalid sequence exits 2", r.returncode == 2, f"rc={r.returncode}")
        check("error names the field", "[sequence] kind" in r.stderr, r.stderr)

        # simulate: CSV + manifest, ~15 cycle points for tau_c = 32 ms over 0.5 s
        out1 = os.path.join(tmp, "out1")
        cfg = os.path.join(tmp, "sim.cfg")
        write_config(cfg, SIM_CONFIG.format(out=out1))
        r = run("simulate", "-c", cfg)
        check("simulate exits 0", r.returncode == 0, r.stderr)
        csv_path = os.path.join(out1, "cpmg_tau16000.csv")
        check("series CSV written", os.path.exists(csv_path))
        with open(csv_path) as f:
            rows = f.read().strip().splitlines()
        check("header + 16 points (t=0 plus 15 cycles)", len(rows) == 17, f"{len(rows)} rows")
        man_path = os.path.join(out1, "cpmg_tau16000.manifest.json")
        check("manifest written", os.path.exists(man_path))
        with open(man_path) as f:
            man = json.load(f)
        check("manifest references its outputs", man["outputs"] == ["cpmg_tau16000.csv"])
        check("manifest records the seed", man["seed"] == 11)

        # replay reproduces the CSV bit-identically
        out2 = os.path.join(tmp, "out2")
        r = run("simulate", "--replay", man_path, "-o", out2)
        check("replay exits 0", r.returncode == 0, r.stderr)
        with open(csv_path, "rb") as f:
            b1 = f.read()
        with open(os.path.join(out2, "cpmg_tau16000.csv"), "rb") as f:
            b2 = f.read()
        check("replay output is bit-identical", b1 == b2)

        # DDSIM_OUTDIR override
        out_env = os.path.join(tmp, "out_env")
        r = run("simulate", "-c", cfg, env={"DDSIM_OUTDIR": out_env})
        check("DDSIM_OUTDIR override", r.returncode == 0 and
              os.path.exists(os.path.join(out_env, "cpmg_tau16000.csv")))

        # noise-free, eps = 0: all-ones amplitudes
        flat_cfg = os.path.join(tmp, "flat.cfg")
        write_config(flat_cfg, """
[sequence]
kind = xy4s
tau_us = 1000
[pulse]
epsilon = 0
[noise]
preset = off
[run]
duration_ms = 100
ensemble = 1
seed = 0
[output]
dir = {out}
""".format(out=os.path.join(tmp, "flat")))
        r = run("simulate", "-c", flat_cfg)
        check("flat simulate exits 0", r.returncode == 0, r.stderr)
        with open(os.path.join(tmp, "flat", "xy4s_tau1000.csv")) as f:
            lines = f.read().strip().splitlines()[1:]
        amps = [float(l.split(",")[1]) for l in lines]
        check("all-ones amplitudes", all(abs(a - 1) < 1e-10 for a in amps))

        # scan: one row per (sequence, tau)
        out3 = os.path.join(tmp, "out3")
        scan_cfg = os.path.join(tmp, "scan.cfg")
        write_config(scan_cfg, SCAN_CONFIG.format(out=out3))
        r = run("scan", "-c", scan_cfg)
        check("scan exits 0", r.returncode == 0, r.stderr)
        with open(os.path.join(out3, "scan.csv")) as f:
            scan_rows = f.read().strip().splitlines()
        check("scan row count contract", len(scan_rows) == 1 + 3 * 2, f"{len(scan_rows)}")
        check("scan header schema",
              scan_rows[0] == "sequence,tau_s,model,a,T2f_s,b,T2s_s,residual,converged")

        # aht-verify: table on stdout, CSV on request
        r = run("aht-verify", "--tau-us", "1000", "-o", out3)
        check("aht-verify exits 0", r.returncode == 0, r.stderr)
        check("aht-verify prints the cpmg row", "cpmg" in r.stdout)
        check("aht_verify.csv written", os.path.exists(os.path.join(out3, "aht_verify.csv")))

        # fit on an existing CSV
        r = run("fit", "--csv", csv_path, "--model", "both")
        check("fit exits 0", r.returncode == 0, r.stderr)
        check("fit prints both models", "single" in r.stdout and "double" in r.stdout)

        r = run("fit", "--csv", os.path.join(tmp, "missing.csv"))
        check("fit on a missing file exits 3", r.returncode == 3, f"rc={r.returncode}")
    finally:
        shutil.rmtree(tmp, ignore_errors=True)

    print(f"{PASS} passed, {FAIL} failed")
    return 1 if FAIL else 0


if __name__ == "__main__":
    sys.exit(main())
