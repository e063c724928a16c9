import sys

# both src are necessary to account for execution on project folder and on example folder
sys.path.append("../../src")
sys.path.append("./src")
import logging

from pouisim.harness import run
from pouisim.interface import SimulationObserver
from pouisim.loader import load_params


class ProgressObserver(SimulationObserver):

    def on_transition(self, job, old, new):
        pass

    def on_validation(self, job, outcome):
        pass

    def on_step(self, step, reader, row):
        if step % 20 == 0:
            print(f"step {step:3d}  reward {row.reward:8.2f}  workers {row.workers:4d}  "
                  f"pending {row.pending_jobs:4d}  staked {reader.get_total_staked():12.2f}  "
                  f"reputation {reader.get_mean_reputation():.3f}  conserved {reader.is_conserved()}")


if __name__ == "__main__":
    logging.basicConfig(level=logging.WARNING)

    config = sys.argv[1] if len(sys.argv) > 1 else "reference.cfg"
    params = load_params(config)

    trace = run(params, ProgressObserver())
    trace.write_csv("trace.csv")
    print(f"wrote {len(trace)} rows to trace.csv")
