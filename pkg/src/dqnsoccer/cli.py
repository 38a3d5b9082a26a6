"""Command-line entry points: train, play, eval, inspect-checkpoint,
verify-replay.

Exit codes: 0 success, 2 bad usage or config, 3 checkpoint format error,
4 replay verification failure, 1 anything else.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from dqnsoccer import checkpoint as ckpt_mod
from dqnsoccer.config import AppConfig, load_config
from dqnsoccer.evaluate import evaluate
from dqnsoccer.match import PolicyFactory, run_match, verify_replay
from dqnsoccer.policies import BASELINES, DqnPolicy, make_baseline
from dqnsoccer.sim.types import Team
from dqnsoccer.training import train

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_USAGE = 2
EXIT_CHECKPOINT = 3
EXIT_REPLAY = 4


def _policy_factory(spec: str, cfg: AppConfig) -> tuple[str, PolicyFactory]:
    """Build a team-policy factory from a spec like 'chaser' or 'checkpoint:PATH'."""
    if spec.startswith("checkpoint:"):
        path = spec.split(":", 1)[1]
        net = ckpt_mod.load_checkpoint(path).to_network()

        def factory(team: Team, rng: np.random.Generator):
            return DqnPolicy(team, cfg, net, epsilon=0.0, rng=rng)

        return Path(path).stem, factory
    if spec in BASELINES:
        return spec, lambda team, rng: make_baseline(spec, team, cfg, rng)
    raise ValueError(f"unknown policy spec '{spec}' (use {'|'.join(BASELINES)} or checkpoint:PATH)")


def _cmd_train(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.steps is not None or args.seed is not None:
        import dataclasses

        trainer = dataclasses.replace(
            cfg.trainer,
            **{
                k: v
                for k, v in {"total_frames": args.steps, "seed": args.seed}.items()
                if v is not None
            },
        )
        cfg = dataclasses.replace(cfg, trainer=trainer)
    result = train(
        cfg,
        checkpoint_path=args.checkpoint,
        metrics_path=args.metrics_out,
        opponent=args.opponent,
        resume=args.resume,
        checkpoint_interval=args.checkpoint_interval,
    )
    print(
        f"trained {result.frames} frames, {result.updates} updates, "
        f"epsilon={result.final_epsilon:.3f} -> {result.checkpoint_path}"
    )
    return EXIT_OK


def _cmd_play(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    home_name, make_home = _policy_factory(args.home, cfg)
    away_name, make_away = _policy_factory(args.opponent, cfg)
    result = run_match(
        make_home,
        make_away,
        cfg,
        seed=args.seed,
        replay_path=args.replay_out,
        home_name=home_name,
        away_name=away_name,
    )
    print(
        f"{home_name} vs {away_name}  {result.home_goals}:{result.away_goals}  {result.outcome}"
        f"  (halves {result.per_half[0][0]}:{result.per_half[0][1]},"
        f" {result.per_half[1][0]}:{result.per_half[1][1]}, seed {result.seed})"
    )
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    _, make_ours = _policy_factory(args.policy, cfg)
    opponents = [_policy_factory(spec, cfg) for spec in args.opponent]
    report = evaluate(make_ours, opponents, args.matches, args.seed, cfg)
    print(report.format_table())
    return EXIT_OK


def _cmd_inspect(args: argparse.Namespace) -> int:
    ckpt = ckpt_mod.load_checkpoint(args.checkpoint)
    dims = "x".join(str(d) for d in ckpt.dims)
    print(f"dims: {dims}")
    print(f"step: {ckpt.step}")
    print(f"epsilon: {ckpt.epsilon}")
    print(f"parameters: {ckpt.params.size}")
    print("checksum: ok")
    return EXIT_OK


def _cmd_verify_replay(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    check = verify_replay(args.replay, cfg)
    if check.mismatches:
        print(
            f"FAIL: {check.mismatches}/{check.frames} rewards differ "
            f"(first at frame {check.first_mismatch})"
        )
        return EXIT_REPLAY
    print(f"ok: {check.frames} frames, all rewards reproduce exactly")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dqnsoccer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a Q-network against a scripted opponent")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--steps", type=int, default=None, help="override total training frames")
    p.add_argument("--checkpoint", type=Path, required=True, help="output checkpoint path")
    p.add_argument(
        "--opponent",
        default="chaser",
        help=f"{'|'.join(sorted(BASELINES))} or checkpoint:PATH",
    )
    p.add_argument("--metrics-out", type=Path, default=None)
    p.add_argument("--resume", type=Path, default=None)
    p.add_argument("--checkpoint-interval", type=int, default=50_000)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("play", help="run one match and print the result")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--home", default="chaser", help="home policy (baseline or checkpoint:PATH)")
    p.add_argument("--opponent", default="random")
    p.add_argument("--replay-out", type=Path, default=None)
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("eval", help="round-robin a policy against opponents")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", default="chaser", help="policy under test")
    p.add_argument(
        "--opponent", action="append", required=True, help="repeatable opponent spec"
    )
    p.add_argument("--matches", type=int, default=1, help="matches per opponent")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("inspect-checkpoint", help="print checkpoint metadata")
    p.add_argument("--checkpoint", type=Path, required=True)
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("verify-replay", help="recompute rewards from a replay log")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--replay", type=Path, required=True)
    p.set_defaults(func=_cmd_verify_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ckpt_mod.CheckpointError as exc:
        print(f"checkpoint error: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - safety net
        print(f"unexpected error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
