"""Command-line front end: ``dropmine <verb> <input.csv> [options]``.

Exit status is 0 on success, 1 on data or contract errors and 2 on usage
errors. Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import apriori, discriminant, evaluation, feature_select, id3, stats, synthgen
from .dataset import Codebook, load_csv, ordinal_code, to_nominal, write_csv
from .errors import MiningError, SpecificationError

GRAMMAR = (
    "dropmine <verb> <input.csv> [--class NAME] [--row NAME --col NAME] [--folds K] "
    "[--seed S] [--min-support X] [--min-confidence X] [--stepwise] [--f-enter X] "
    "[--f-remove X] [--n N] [--out PATH] [--format text|json]\n"
    "verbs: describe, crosstab, select, train, eval, rules, lda, generate"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dumps(obj) -> str:
    def clean(o):
        if isinstance(o, float) and (math.isnan(o) or math.isinf(o)):
            return None
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return o

    return json.dumps(clean(obj), indent=2)


def _load(args, nominal=True):
    codebook = Codebook.load(args.codebook) if getattr(args, "codebook", None) else None
    d = load_csv(args.input, args.class_attribute, codebook)
    return to_nominal(d) if nominal else d


def cmd_describe(args):
    d = _load(args)
    tables = [stats.one_way_frequency(d, a.name) for a in d.attributes]
    if args.format == "json":
        return _dumps({"n": len(d), "frequencies": [t.to_dict() for t in tables]})
    blocks = [f"Sample size (n): {len(d)}"] + [t.render() for t in tables]
    return "\n\n".join(blocks)


def cmd_crosstab(args):
    if not args.row or not args.col:
        raise UsageError("crosstab needs --row and --col")
    d = _load(args)
    t = stats.crosstab(d, args.row, args.col)
    result = stats.chi_square(t)
    if args.format == "json":
        return _dumps({**t.to_dict(), **result.to_dict()})
    return t.render() + "\n" + result.render()


def cmd_select(args):
    d = _load(args)
    res = feature_select.best_first_select(d, feature_select.SearchConfig(stale_limit=args.stale))
    if args.format == "json":
        return _dumps(res.to_dict())
    positions = {name: i + 1 for i, name in enumerate(d.names)}
    return res.render(f"{positions[d.class_attribute]} {d.class_attribute}", positions)


def cmd_train(args):
    d = _load(args)
    tree = id3.build_tree(d)
    rules = id3.extract_rules(tree)
    ranking = id3.rank_attributes(d)
    if args.format == "json":
        return _dumps({
            "ranking": [{"attribute": a, "gain": g} for a, g in ranking],
            "tree": id3.tree_to_dict(tree),
            "rules": [{"if": [list(t) for t in r.antecedent], "then": r.consequent} for r in rules],
        })
    lines = ["=== Ranked attributes (information gain) ==="]
    lines += [f"{g:.4f}  {a}" for a, g in ranking]
    lines += ["", "=== Id3 ===", "", id3.render_tree(tree), "",
              f"Number of leaves: {id3.leaves(tree)}", "", "=== Classifier rules ==="]
    lines += [r.render(d.class_attribute) for r in rules]
    return "\n".join(lines)


def cmd_eval(args):
    d = _load(args)
    m, report = evaluation.cross_validate(d, args.folds, args.seed)
    if args.format == "json":
        return _dumps({"folds": args.folds, "seed": args.seed, "n": len(d),
                       "confusion": m.to_dict(), "report": report.to_dict()})
    head = f"=== Stratified cross-validation ({args.folds} folds, seed {args.seed}) ==="
    return "\n".join([head, "", report.render(len(d)), "", m.render()])


def cmd_rules(args):
    if args.class_attribute:
        d = _load(args)
        db = apriori.encode_transactions(d, synthgen.default_factor_map())
    else:
        db = apriori.read_transactions(args.input)
    itemsets = apriori.frequent_itemsets(db, args.min_support)
    rules = apriori.generate_rules(db, args.min_support, args.min_confidence)
    if args.format == "json":
        return _dumps({
            "transactions": len(db),
            "itemsets": [{"items": list(s.items), "count": s.count, "support": s.support}
                         for s in itemsets],
            "rules": [r.to_dict() for r in rules],
        })
    lines = [f"Transactions: {len(db)}", "", "=== Frequent itemsets ==="]
    lines += [f"{','.join(s.items)}  [count={s.count}, support={s.support:.2f}]" for s in itemsets]
    lines += ["", "=== Rules ==="] + [r.render() for r in rules]
    return "\n".join(lines)


def cmd_lda(args):
    d = _load(args, nominal=False)
    coded = ordinal_code(d)
    if coded is not d:
        print("note: nominal predictors coded by domain position; pass --codebook to control coding",
              file=sys.stderr)
    if args.stepwise:
        trace, model = discriminant.stepwise_select(coded, args.f_enter, args.f_remove)
    else:
        trace, model = None, discriminant.fit_lda(coded)
    if model is None:
        if args.format == "json":
            return _dumps({"stepwise": trace.to_dict(), "model": None})
        return trace.render() + "\n\nNo variable qualified for entry."
    sig = discriminant.significance(model, coded)
    coefs = discriminant.coefficient_reports(model, coded)
    table = discriminant.classification_table(model, coded)
    summary = discriminant.score_summary(model, coded)
    if args.format == "json":
        return _dumps({
            "stepwise": trace.to_dict() if trace else None,
            "significance": sig.to_dict(),
            "coefficients": coefs.to_dict(),
            "model": model.to_dict(),
            "classification": table.to_dict(),
            "scores": summary,
        })
    blocks = []
    if trace:
        blocks.append("=== Variables entered/removed ===\n" + trace.render())
    blocks.append("=== Significance of discriminant function ===\n" + sig.render())
    blocks.append("=== Standardized and structure coefficients ===\n" + coefs.render())
    unstd = "\n".join(f"{n:<20}{c:>8.3f}" for n, c in zip(model.predictors, model.coefficients))
    blocks.append("=== Unstandardized coefficients ===\n" + unstd + f"\n{'Constant':<20}{model.constant:>8.3f}"
                  + f"\n\n{model.equation()}")
    blocks.append("=== Classification results ===\n" + table.render())
    score_lines = [f"{g:<6} n={s['n']:<4} min={s['min']:.3f} max={s['max']:.3f} "
                   f"mean={s['mean']:.3f} sd={s['sd']:.3f}" for g, s in summary.items()]
    blocks.append("=== Discriminant scores by group ===\n" + "\n".join(score_lines)
                  + f"\ncut point={model.cut_point:.3f}")
    return "\n\n".join(blocks)


def cmd_generate(args):
    spec = synthgen.default_spec()
    if args.n is not None and args.n != spec.n:
        raise SpecificationError(f"the default cohort has N={spec.n}; --n {args.n} cannot keep "
                                 f"the published counts")
    d = synthgen.generate(spec, args.seed)
    comment = synthgen.header_comment(args.seed)
    if args.codebook_out:
        Path(args.codebook_out).write_text(synthgen.default_codebook(spec).dumps(), encoding="utf-8")
    if args.out:
        write_csv(d, args.out, comment)
        msg = {"out": args.out, "n": len(d), "attributes": len(d.attributes), "seed": args.seed}
        return _dumps(msg) if args.format == "json" else (
            f"wrote {len(d)} instances x {len(d.attributes)} attributes to {args.out} (seed {args.seed})")
    from .dataset import dumps_csv
    return dumps_csv(d, comment).rstrip("\n")


COMMANDS = {
    "describe": cmd_describe,
    "crosstab": cmd_crosstab,
    "select": cmd_select,
    "train": cmd_train,
    "eval": cmd_eval,
    "rules": cmd_rules,
    "lda": cmd_lda,
    "generate": cmd_generate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dropmine", description="Categorical data mining for dropout analysis.")
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser)

    def add(verb, help_text, needs_input=True):
        p = sub.add_parser(verb, help=help_text)
        if needs_input:
            p.add_argument("input", help="input CSV file")
            p.add_argument("--class", dest="class_attribute", default=None,
                           help="class attribute (default: last column)")
            p.add_argument("--codebook", default=None, help="attribute:raw=coded mapping file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        return p

    add("describe", "one-way frequency tables")
    p = add("crosstab", "crosstab with chi-square test")
    p.add_argument("--row")
    p.add_argument("--col")
    p = add("select", "correlation-based feature selection")
    p.add_argument("--stale", type=int, default=5, help="stale expansions before stopping")
    add("train", "build an ID3 tree and print rules")
    p = add("eval", "stratified k-fold cross-validation of ID3")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p = add("rules", "Apriori itemsets and association rules")
    p.add_argument("--min-support", type=float, default=0.05)
    p.add_argument("--min-confidence", type=float, default=0.4)
    p = add("lda", "two-group discriminant analysis")
    p.add_argument("--stepwise", action="store_true")
    p.add_argument("--f-enter", type=float, default=3.84)
    p.add_argument("--f-remove", type=float, default=2.71)
    p = add("generate", "write the synthetic cohort", needs_input=False)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--codebook-out", default=None)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.verb:
            raise UsageError("missing verb")
        out = COMMANDS[args.verb](args)
    except UsageError as exc:
        print(f"usage error: {exc}\n{GRAMMAR}", file=stderr)
        return 2
    except (MiningError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    print(out, file=stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
