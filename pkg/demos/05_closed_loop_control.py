"""Closed-loop displacement control in the latent space.

Each joint is a first-order lag (250 ms time constant) sampled at 1 kHz
with uniform measurement noise of 2.5 mm.  Desired and measured joint
vectors are both encoded to the 2-D latent pair, a single PD gain pair
(Kp = 75, Kd = 0.0015) acts there, and the command is decoded back, so two
controllers serve any joint count.  The full experiment samples via points
on the three-joint surrogate, retargets the trajectory, and compares
open-loop and closed-loop behavior.
"""

import numpy as np

from clarkekit import builtin_designs, run_experiment

designs = builtin_designs()
surrogate = designs["robot_0"]

print("target    mode              rms/joint [mm]   latent rms   max err [mm]")
for name in ("robot_0", "robot_A", "robot_B", "robot_C", "robot_D"):
    runs = run_experiment(surrogate, designs[name], seed=42, transfer_mode="general")
    for mode in ("open_loop_clean", "closed_loop"):
        sim = runs[mode]
        rms = np.mean(sim.rms_per_joint()) * 1000
        print(f"{name:9s} {mode:17s} {rms:12.4f} {sim.rms_latent():12.4f} "
              f"{sim.max_abs_error() * 1000:12.4f}")

# Open loop lags a ramp by v*T (about 7.9 mm at the demo cruise speed);
# the proportional gain shrinks the tracking error by roughly 1 + Kp.

# Retargeting without distance compensation leaves a desired stream the
# latent controller cannot realize, so the error floor rises sharply.
print("\nclosed-loop rms/joint [mm]: compensated vs uncompensated retargeting")
for name in ("robot_B", "robot_C", "robot_D"):
    general = run_experiment(surrogate, designs[name], 42, "general",
                             modes=("closed_loop",))["closed_loop"]
    symmetric = run_experiment(surrogate, designs[name], 42, "symmetric",
                               modes=("closed_loop",))["closed_loop"]
    print(f"{name:9s} {np.mean(general.rms_per_joint()) * 1000:8.4f} "
          f"vs {np.mean(symmetric.rms_per_joint()) * 1000:8.4f}")
