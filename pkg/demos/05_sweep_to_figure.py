"""End-to-end: sweep two families, write the CSV, and (if the frontend is
built) render the combined scatter figure.

Equivalent CLI:
    isospec sweep --family rectangle --params 1:6 --out rect.csv
    isospec sweep --family annulus --params 0.1:0.7:0.2 --out ann.csv
    node frontend/dist/cli.js figure.svg rect.csv ann.csv
"""

import pathlib
import subprocess

import isospec as iso
from isospec.counting import reports_to_csv, spearman_rank_correlation

out_dir = pathlib.Path("demo_output")
out_dir.mkdir(exist_ok=True)

reports = iso.sweep("rectangle", [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
reports += iso.sweep("annulus", [0.1, 0.3, 0.5, 0.7])

csv_path = out_dir / "sweep.csv"
csv_path.write_text(reports_to_csv(reports))
print(f"wrote {csv_path} ({len(reports)} rows)")

rho = spearman_rank_correlation([r.count for r in reports],
                                [r.iso_ratio for r in reports])
print(f"rank correlation between N and I over this sweep: {rho:.3f}")

renderer = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "dist" / "cli.js"
if renderer.exists():
    svg_path = out_dir / "sweep.svg"
    subprocess.run(["node", str(renderer), str(svg_path), str(csv_path),
                    "--title", "N vs I"], check=True)
    print(f"wrote {svg_path}")
else:
    print("frontend not built; run `npm install && npm run build` in frontend/ first")
