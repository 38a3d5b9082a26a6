#!/usr/bin/env python3
"""Print a text ticker of one match between two policies."""
import argparse

import numpy as np

from dqnsoccer.checkpoint import load_checkpoint
from dqnsoccer.config import load_config
from dqnsoccer.policies import DqnPolicy, make_baseline
from dqnsoccer.sim import Team, advance, initial_world


def build(spec, team, cfg, rng):
    if spec.startswith("checkpoint:"):
        net = load_checkpoint(spec.split(":", 1)[1]).to_network()
        return DqnPolicy(team, cfg, net, epsilon=0.0, rng=rng)
    return make_baseline(spec, team, cfg, rng)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=None)
    parser.add_argument("--home", default="chaser")
    parser.add_argument("--away", default="random")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--frames", type=int, default=6000)
    parser.add_argument("--every", type=int, default=100)
    args = parser.parse_args()

    cfg = load_config(args.config)
    rngs = [np.random.default_rng(c) for c in np.random.SeedSequence(args.seed).spawn(2)]
    world = initial_world(cfg.field, kicking=Team.HOME)
    home = build(args.home, Team.HOME, cfg, rngs[0])
    away = build(args.away, Team.AWAY, cfg, rngs[1])
    for frame in range(1, args.frames + 1):
        events = advance(world, home.commands(world) + away.commands(world))
        for e in events:
            who = e.team.value if e.team else "-"
            print(f"t={world.time:6.1f}s  {e.kind:<16} {who}  {e.detail}")
        if frame % args.every == 0:
            b = world.ball.pos
            print(
                f"t={world.time:6.1f}s  score {world.score_home}:{world.score_away}  "
                f"phase={world.phase.kind.value:<12} ball=({b.x:+.2f},{b.y:+.2f})"
            )
    print(f"final {world.score_home}:{world.score_away}")


if __name__ == "__main__":
    main()
