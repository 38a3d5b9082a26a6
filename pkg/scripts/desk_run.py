#!/usr/bin/env python3
"""Desk-scale experiment: train the full-size agent against the ball
chaser, then report a round-robin table against the built-in baselines.

Roughly 10 minutes on a laptop CPU. Outputs land in --out-dir.
"""
import argparse
import time
from pathlib import Path

from dqnsoccer.checkpoint import load_checkpoint
from dqnsoccer.config import AppConfig, TrainerConfig
from dqnsoccer.evaluate import evaluate
from dqnsoccer.policies import BallChaserPolicy, DqnPolicy, RandomPolicy
from dqnsoccer.training import train


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--frames", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--matches", type=int, default=20)
    parser.add_argument("--out-dir", type=Path, default=Path("desk_out"))
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    cfg = AppConfig(
        trainer=TrainerConfig(
            total_frames=args.frames,
            episode_frames=2000,
            epsilon_interval=5000,
            seed=args.seed,
        )
    )
    ckpt_path = args.out_dir / "desk.ckpt"
    t0 = time.time()
    result = train(
        cfg,
        ckpt_path,
        metrics_path=args.out_dir / "metrics.jsonl",
        opponent="chaser",
        checkpoint_interval=20_000,
    )
    print(
        f"trained {result.frames} frames / {result.updates} updates "
        f"in {(time.time() - t0) / 60:.1f} min, final epsilon {result.final_epsilon:.2f}"
    )

    net = load_checkpoint(ckpt_path).to_network()
    report = evaluate(
        lambda team, rng: DqnPolicy(team, cfg, net, epsilon=0.0, rng=rng),
        [
            ("random", lambda team, rng: RandomPolicy(team, cfg, rng)),
            ("chaser", lambda team, rng: BallChaserPolicy(team, cfg, rng)),
        ],
        n_matches=args.matches,
        base_seed=10_000,
        cfg=cfg,
    )
    print(report.format_table())


if __name__ == "__main__":
    main()
