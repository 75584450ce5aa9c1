"""The command-line front end, driven from Python.

Every subcommand writes a CSV whose leading '#' lines record the full
resolved configuration, so a file can be regenerated from its own header.
The same calls work from a shell as `cylcasimir <subcommand> ...`.

Run:  python3 demos/06_command_line.py
"""

import tempfile
from pathlib import Path

from cylcasimir.cli import main

work = Path(tempfile.mkdtemp(prefix="cylcasimir-demo-"))

(work / "sweep.cfg").write_text("# a shorter, coarser sweep\npoints = 6\nd-max = 4e-6\n")
main(["force-table", "--config", str(work / "sweep.cfg"), "--out", str(work / "forces.csv")])
print((work / "forces.csv").read_text())

main(["synth", "--model", "powerlaw", "--truth", "a_offset=0,b_scale=-554.26,V_MAX=177.4",
      "--x-min", "0", "--x-max", "70", "--points", "8", "--noise", "0.05", "--relative",
      "--seed", "42", "--out", str(work / "kc.dat")])
main(["calibrate", "powerlaw", str(work / "kc.dat"), "--out", str(work / "kc_residuals.csv")])

status = main(["lifshitz-ratio", "--material", "copper"])
print(f"\nan unknown material exits with status {status}")
print(f"files are in {work}")
