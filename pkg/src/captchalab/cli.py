"""Command-line entry point.

Subcommands: generate, train, break, extgen, serve, report. Exit codes:
0 success, 1 operation failure (codec errors, a --expect mismatch, ...),
2 usage. Every subcommand is non-interactive; --json switches stdout to a
single JSON object where applicable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .breaker import BreakerConfig, break_captcha
from .captcha import CaptchaSpec, generate
from .errors import CaptchaLabError
from .extcaptcha import SpriteDb, default_sprites, default_words, generate_challenge, load_wordlist
from .glyphs import default_atlas, load_atlas
from .harness import TrialStore, make_server
from .imgcore import pgm_decode, pgm_encode
from .ocrnet import TrainConfig, load_model, save_model, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="captchalab",
        description="Generate, break, and referee text CAPTCHAs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="render a challenge image to a PGM file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--text", required=True, help="uppercase challenge text")
    p.add_argument("--out", required=True, help="output .pgm path")
    p.add_argument("--noise", type=float, default=None, help="override noise density")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("train", help="train the character classifier")
    p.add_argument("--atlas", default=None, help="GAF atlas file (default: bundled)")
    p.add_argument("--out", required=True, help="output model path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("break", help="run the OCR pipeline on a PGM image")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="input", required=True, help="challenge .pgm")
    p.add_argument("--expect", default=None,
                   help="exit 0 only if the broken text equals this")
    p.add_argument("--chars", type=int, default=4, help="expected character count")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("extgen", help="generate an object-and-question challenge")
    p.add_argument("--sprites", default=None, help="sprite directory (default: bundled)")
    p.add_argument("--words", default=None, help="wordlist file (default: bundled)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-prefix", required=True,
                   help="writes <prefix>.pgm and <prefix>.json")
    p.add_argument("--objects", type=int, default=4)
    p.add_argument("--word-count", type=int, default=8)
    p.add_argument("--questions", type=int, default=5)
    p.add_argument("--reveal", action="store_true",
                   help="include the expected answer and word placements")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("serve", help="run the interrogator HTTP service")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--store", required=True, help="trial log path (JSON Lines)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--ui", default=None, help="directory served under /ui/")
    p.add_argument("--spec", action="append", default=[], metavar="KEY=VALUE",
                   help="challenge spec override for new trials (repeatable)")

    p = sub.add_parser("report", help="print aggregate metrics for a trial store")
    p.add_argument("--store", required=True)
    p.add_argument("--out-dir", default=None,
                   help="also write figures and a per-trial CSV here")
    p.add_argument("--json", action="store_true")

    return parser


def _cmd_generate(args) -> int:
    spec_kwargs = {}
    if args.noise is not None:
        spec_kwargs["noise_density"] = args.noise
    spec = CaptchaSpec(text=args.text, seed=args.seed, **spec_kwargs)
    inst = generate(spec)
    Path(args.out).write_bytes(pgm_encode(inst.image))
    if args.json:
        print(json.dumps({"out": args.out, "text": inst.truth,
                          "seed": args.seed, "canvas": list(spec.canvas)}))
    else:
        print(f"wrote {args.out} ({inst.image.width}x{inst.image.height})")
    return 0


def _cmd_train(args) -> int:
    if args.atlas:
        atlas = load_atlas(Path(args.atlas).read_bytes())
    else:
        atlas = default_atlas()
    model = train(atlas, TrainConfig(seed=args.seed))
    Path(args.out).write_bytes(save_model(model))
    if args.json:
        print(json.dumps({"out": args.out, "examples": 104}))
    else:
        print(f"wrote {args.out}")
    return 0


def _cmd_break(args) -> int:
    model = load_model(Path(args.model).read_bytes())
    img = pgm_decode(Path(args.input).read_bytes())
    result = break_captcha(img, model, BreakerConfig(expected_chars=args.chars))
    if args.json:
        print(json.dumps({"text": result.text,
                          "confidences": list(result.per_char_confidence)}))
    else:
        print(result.text)
    if args.expect is not None and result.text != args.expect:
        return 1
    return 0


def _cmd_extgen(args) -> int:
    db = SpriteDb.load(args.sprites) if args.sprites else default_sprites()
    if args.words:
        words = load_wordlist(Path(args.words).read_text())
    else:
        words = default_words()
    challenge = generate_challenge(db, words, default_atlas(), args.seed,
                                   k_objects=args.objects, m_words=args.word_count,
                                   l_questions=args.questions)
    pgm_path = Path(args.out_prefix + ".pgm")
    json_path = Path(args.out_prefix + ".json")
    pgm_path.write_bytes(pgm_encode(challenge.image))
    payload = challenge.public_dict(reveal=args.reveal)
    payload["image"] = pgm_path.name
    json_path.write_text(json.dumps(payload, indent=2) + "\n")
    if args.json:
        print(json.dumps({"image": str(pgm_path), "questions": str(json_path),
                          "question_count": len(challenge.questions)}))
    else:
        print(f"wrote {pgm_path} and {json_path}")
    return 0


def _parse_spec_overrides(pairs: list[str]) -> dict:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise CaptchaLabError(f"--spec needs KEY=VALUE, got {pair!r}")
        key, value = pair.split("=", 1)
        try:
            overrides[key] = json.loads(value)
        except json.JSONDecodeError:
            overrides[key] = value
    return overrides


def _cmd_serve(args) -> int:
    store = TrialStore(args.store)
    server = make_server(store, host=args.host, port=args.port, ui_dir=args.ui,
                         spec_overrides=_parse_spec_overrides(args.spec))
    host, port = server.server_address
    print(f"serving on http://{host}:{port} (store: {args.store})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _cmd_report(args) -> int:
    store = TrialStore(args.store)
    report = store.aggregate_report()
    pct = report.percentages()
    if args.json:
        print(json.dumps(report.to_json_dict()))
    else:
        print("machine_char={machine_char_rate:.2f} human_char={human_char_rate:.2f} "
              "machine_full={machine_full_rate:.2f} human_full={human_full_rate:.2f}"
              .format(**pct))
    if args.out_dir:
        from .figures import write_report_artifacts

        for path in write_report_artifacts(report, args.out_dir):
            print(f"wrote {path}", file=sys.stderr)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "train": _cmd_train,
    "break": _cmd_break,
    "extgen": _cmd_extgen,
    "serve": _cmd_serve,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CaptchaLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
