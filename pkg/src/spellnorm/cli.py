"""Command-line entry point: ``spellnorm <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

import argparse
import hashlib
import json
import logging
import platform
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .align import DEFAULT_MAX_LEN, build_phrase_table, read_table, write_table
from .corpus import char_tokenize, corpus_stats, load_parallel, read_lines, write_lines
from .decoder import Decoder, DecoderConfig, normalize_sentences, read_weights, write_weights
from .errors import DataError, ParameterError
from .lm import read_arpa, train_lm, write_arpa
from .metrics import evaluate
from .report import dump_report, format_table, reproduce
from .significance import ARConfig, ar_test
from .synth import DEFAULT_RULES, degrade, generate_modern, make_splits, read_rules
from .tuner import TuneConfig, tune

EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 1, 2, 3

log = logging.getLogger("spellnorm")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _emit(text: str, out=None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_stats(args):
    corpus = load_parallel(args.src, args.tgt, name=args.name, split=args.split)
    stats = corpus_stats(corpus)
    _emit(stats.to_tsv() if args.tsv else stats.to_json() + "\n")


def cmd_train(args):
    corpus = load_parallel(args.src, args.tgt, name="train", split="train")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = build_phrase_table(corpus, max_len=args.max_len, min_count=args.min_count)
    lm = train_lm([char_tokenize(t) for t in corpus.targets], args.order)
    write_table(table, out / "phrase-table.tsv")
    write_arpa(lm, out / "lm.arpa")
    manifest = {
        "version": __version__,
        "parameters": {"order": args.order, "max_len": args.max_len, "min_count": args.min_count},
        "inputs": {
            "src": {"path": str(args.src), "sha256": _sha256(args.src)},
            "tgt": {"path": str(args.tgt), "sha256": _sha256(args.tgt)},
        },
        "outputs": {
            "phrase-table.tsv": _sha256(out / "phrase-table.tsv"),
            "lm.arpa": _sha256(out / "lm.arpa"),
        },
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    log.info("wrote %d phrase pairs and %d n-grams to %s", len(table), len(lm.prob), out)


def _decoder(args) -> Decoder:
    cfg = DecoderConfig(beam_size=args.beam, max_len=args.max_len, oov_policy=not args.no_oov_copy)
    return Decoder(read_table(args.table), read_arpa(args.lm), cfg)


def cmd_tune(args):
    dev = load_parallel(args.dev_src, args.dev_tgt, name="dev", split="dev")
    cfg = TuneConfig(objective=args.objective, restarts=args.restarts,
                     iterations=args.iterations, seed=args.seed)
    result = tune(dev, _decoder(args), cfg, args.threads)
    write_weights(result.weights, args.out)
    log.info("dev %s %.4f", args.objective, abs(result.objective))


def cmd_normalize(args):
    decoder = _decoder(args)
    weights = read_weights(args.weights)
    outputs, repairs = normalize_sentences(read_lines(getattr(args, "in")), decoder, weights, args.threads)
    write_lines(args.out, outputs)
    if repairs:
        log.warning("%d boundary repairs", repairs)


def cmd_evaluate(args):
    if not args.hyp and not args.src:
        raise ParameterError("evaluate needs --hyp, --src, or both")
    refs = read_lines(args.ref)
    rows = {}
    for name, path in (("hypothesis", args.hyp), ("baseline", args.src)):
        if path:
            hyps = read_lines(path)
            if len(hyps) != len(refs):
                raise DataError(f"{path} has {len(hyps)} lines but {args.ref} has {len(refs)}")
            rows[name] = evaluate(hyps, refs, args.cer_denominator)
    if args.tsv:
        header = None
        lines = []
        for name, report in rows.items():
            d = report.to_dict()
            header = "system\t" + "\t".join(d)
            lines.append(name + "\t" + "\t".join(f"{v:.2f}" if isinstance(v, float) else str(v)
                                                 for v in d.values()))
        _emit(header + "\n" + "\n".join(lines) + "\n")
    elif len(rows) == 1:
        _emit(next(iter(rows.values())).to_json() + "\n")
    else:
        _emit(json.dumps({k: v.to_dict() for k, v in rows.items()}, indent=2) + "\n")


def cmd_compare(args):
    a, b, refs = read_lines(args.hyp_a), read_lines(args.hyp_b), read_lines(args.ref)
    if not len(a) == len(b) == len(refs):
        raise DataError(f"line counts differ: {len(a)} / {len(b)} / {len(refs)}")
    cfg = ARConfig(repetitions=args.reps, alpha=args.alpha, seed=args.seed, metric=args.metric)
    res = ar_test(a, b, refs, cfg)
    if args.json:
        _emit(json.dumps(asdict(res), indent=2) + "\n")
    else:
        verdict = "significant" if res.significant else "not significant"
        _emit(f"metric\t{res.metric}\ndelta\t{res.observed_delta:.4f}\n"
              f"p-value\t{res.p_value:.6f}\nverdict\t{verdict} at alpha={args.alpha}\n")


def cmd_synth(args):
    rules = read_rules(args.rules) if args.rules else DEFAULT_RULES
    if args.out_dir:
        sizes = tuple(int(x) for x in args.sizes.split(","))
        if len(sizes) != 3:
            raise ParameterError("--sizes takes three comma-separated counts: train,dev,test")
        make_splits(args.out_dir, sizes, rules, args.seed)
        return
    if not (args.out_src and args.out_tgt):
        raise ParameterError("synth needs --out-src and --out-tgt (or --out-dir)")
    if getattr(args, "in"):
        modern = read_lines(getattr(args, "in"))
    elif args.generate:
        modern = generate_modern(args.generate, seed=args.seed)
    else:
        raise ParameterError("synth needs --in FILE or --generate N")
    corpus = degrade(modern, rules, seed=args.seed) if modern else None
    write_lines(args.out_src, corpus.sources if corpus else [])
    write_lines(args.out_tgt, corpus.targets if corpus else [])


def cmd_reproduce(args):
    tune_cfg = TuneConfig(objective=args.objective, restarts=args.restarts,
                          iterations=args.iterations, seed=args.seed)
    dec_cfg = DecoderConfig(beam_size=args.beam, max_len=args.max_len)
    report = reproduce(args.corpus_dir, seed=args.seed, order=args.order, max_len=args.max_len,
                       tune_cfg=tune_cfg, dec_cfg=dec_cfg, repetitions=args.reps,
                       alpha=args.alpha, threads=args.threads, out_dir=args.out_dir)
    if args.json:
        Path(args.json).write_text(dump_report(report), encoding="utf-8")
    sys.stdout.write(format_table(report))


def _decoder_args(p):
    p.add_argument("--table", required=True, help="phrase table (TSV)")
    p.add_argument("--lm", required=True, help="ARPA language model")
    p.add_argument("--beam", type=int, default=12)
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.add_argument("--no-oov-copy", action="store_true", help="fail instead of copying unknown characters")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spellnorm", description="Character-based SMT spelling normalization.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser.add_argument("--threads", type=int, default=1, help="worker processes")
    # same flags after the subcommand; SUPPRESS keeps them from clobbering the top-level values
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    parser.add_argument("--version", action="version",
                        version=f"spellnorm {__version__} (python {platform.python_version()})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", parents=[common], help="corpus statistics")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--name", default="corpus")
    p.add_argument("--split", default="train", choices=["train", "dev", "test"])
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--tsv", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", parents=[common], help="build phrase table and LM")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.add_argument("--min-count", type=int, default=1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tune", parents=[common], help="tune log-linear weights on dev")
    p.add_argument("--dev-src", required=True)
    p.add_argument("--dev-tgt", required=True)
    _decoder_args(p)
    p.add_argument("--objective", choices=["bleu", "cer", "ter"], default="bleu")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("normalize", parents=[common], help="decode a file")
    _decoder_args(p)
    p.add_argument("--weights", required=True)
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("evaluate", parents=[common], help="CER/TER/BLEU")
    p.add_argument("--hyp")
    p.add_argument("--ref", required=True)
    p.add_argument("--src", help="original text, scored as the identity baseline")
    p.add_argument("--cer-denominator", choices=["ref", "hyp"], default="ref")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--tsv", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", parents=[common], help="approximate randomization test")
    p.add_argument("--hyp-a", required=True)
    p.add_argument("--hyp-b", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--metric", choices=["cer", "ter", "bleu"], default="bleu")
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", parents=[common], help="synthetic parallel data")
    p.add_argument("--rules", help="rule TSV (default: built-in Spanish-like rules)")
    p.add_argument("--in", help="modern sentences, one per line")
    p.add_argument("--generate", type=int, help="sample N modern sentences instead of --in")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-src")
    p.add_argument("--out-tgt")
    p.add_argument("--out-dir", help="write train/dev/test splits here instead")
    p.add_argument("--sizes", default="2000,200,200", help="train,dev,test sizes for --out-dir")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("reproduce", parents=[common], help="baseline vs CBSMT report")
    p.add_argument("--corpus-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.add_argument("--beam", type=int, default=12)
    p.add_argument("--objective", choices=["bleu", "cer", "ter"], default="bleu")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--json", help="write the JSON report here")
    p.add_argument("--out-dir", help="keep the normalized test output here")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except ParameterError as exc:
        print(f"spellnorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"spellnorm: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"spellnorm: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
