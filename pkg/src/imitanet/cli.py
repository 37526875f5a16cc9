"""``imitanet <command> --config FILE [--out DIR] [--seed N]``.

Exit status: 0 on success, 1 for bad input, 2 for a numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import COMMANDS, ConfigError, load, resolve
from .dynamics import NumericFailure
from .experiments import COMMANDS as RUNNERS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse would exit with 2, which is reserved for numeric failures
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="imitanet", description="Imitation dynamics experiments on networks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON experiment spec")
    p.add_argument("--out", help="output directory (default: spec 'out' or ./out)")
    p.add_argument("--seed", type=int, help="master seed, overrides the spec")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        spec = resolve(load(args.config), args.command, args.seed)
        out = Path(args.out or spec.get("out", "out"))
        files = RUNNERS[args.command](spec, out)
        shown = {k: v for k, v in spec.items() if k not in ("base_dir", "out")}
        manifest = {"command": args.command, "version": __version__, "seed": spec.get("seed"),
                    "config": shown, "files": sorted(files)}
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except NumericFailure as e:
        print(f"imitanet: numeric failure: {e}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, KeyError, TypeError, OSError) as e:
        print(f"imitanet: input error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {len(files) + 1} files to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
