# From a tracking CSV to exported grids
# =====================================
#
# The bundled sample mimics the Last Row layout: percent coordinates, teams
# labelled attack/defense, ball rows with an empty team. Attack is mapped to
# Home (positive values).

from pathlib import Path

from knnpitch import ColumnMapping, compute_control, export_grid, import_grid, parse_tracking
from knnpitch.cli import PRESETS

sample = Path(__file__).parent.parent / "tests" / "data" / "lastrow_sample.csv"
out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

plays = parse_tracking(sample, ColumnMapping())
for play in plays:
    print(f"{play.play_id}: {len(play.frames)} frames")
    for frame in play.frames:
        for p in frame.players:
            print(f"  frame {frame.frame_index} {p.player_id:>3} {p.team.value}: "
                  f"({p.x:6.2f}, {p.y:5.2f}) m  velocity ({p.dx:+.2f}, {p.dy:+.2f}) m/frame")

play = plays[0]
last = play.frames[-1]
grid = compute_control(last, PRESETS["spearman_like"])
path = out_dir / f"04_frame{last.frame_index}.json"
path.write_bytes(export_grid(grid, "json"))
back = import_grid(path.read_bytes(), "json")
print("round trip exact:", (back.values == grid.values).all())
