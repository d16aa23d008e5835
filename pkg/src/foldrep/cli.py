"""Command-line front end: build, fold, certify, inspect.

Exit codes: 0 success, 1 honest NotCertified verdict, 2 input or usage
error.  All outputs are deterministic: identical arguments and inputs
produce byte-identical files.

A surface file holds a pants decomposition with Fenchel-Nielsen
coordinates.  A representation dump (from `surface assemble` or `fold`)
embeds its surface file (and labeling, for folds), so downstream
commands rebuild the representation from the same data and reproduce
in-process results exactly.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .domination import (
    _budgeted_probe_letters,
    Verdict,
    dominating_fuchsian,
    enumerate_words,
    ratio_spectrum,
    spectrum_csv,
    strictly_dominated_fold,
)
from .folding import Labeling, fold_surface, prescribe_labeling
from .moebius import INFINITY, fixed_points
from .pants import (
    PantsBranch,
    PantsRep,
    build_pants_rep,
    classify_pants_rep,
    fold_pants,
    unfold_pants,
)
from .surface import (
    assemble_fuchsian,
    cuff_holonomy,
    euler_class_surface,
    surface_from_json,
    surface_to_json,
)

SVG_HASH_SALT = "foldrep"


# -- I/O helpers --------------------------------------------------------


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text, path):
    if not text.endswith("\n"):
        text += "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dumps(data):
    return json.dumps(data, indent=2, sort_keys=True)


def _pants_rep_dict(rep):
    return {
        "alpha": rep.alpha.to_json_dict(),
        "beta": rep.beta.to_json_dict(),
        "class": classify_pants_rep(rep).value,
    }


def _load_surface(path):
    return surface_from_json(_read(path))


def _load_labels(args, pd):
    if getattr(args, "labels", None) is not None:
        return Labeling.from_json(_read(args.labels))
    return prescribe_labeling(pd, args.euler)


def _load_rep_dump(path):
    """Rebuild a representation from a dump's embedded surface data."""
    data = json.loads(_read(path))
    if "surface" not in data:
        raise ValueError(
            f"{path} does not embed its surface data; produce it with "
            f"`surface assemble` or `fold`")
    pd, fn = surface_from_json(data["surface"])
    if "labels" in data:
        _, rep = fold_surface(pd, fn, Labeling.from_json(data["labels"]))
    else:
        rep = assemble_fuchsian(pd, fn)
    return rep


def _rep_dump(rep, pd, fn, labels=None):
    dump = rep.to_dump_dict()
    dump["surface"] = json.loads(surface_to_json(pd, fn))
    if labels is not None:
        dump["labels"] = json.loads(labels.to_json())
    return _dumps(dump)


# -- axes figure --------------------------------------------------------


def _geodesic_points(u, v, samples=256):
    """Points of the half-plane geodesic with ideal endpoints u, v."""
    if u == INFINITY or v == INFINITY:
        x = v if u == INFINITY else u
        y = np.geomspace(1e-3, 1e3, samples)
        return x + 1j * y
    center = (u + v) / 2.0
    radius = abs(u - v) / 2.0
    theta = np.linspace(1e-3, np.pi - 1e-3, samples)
    return center + radius * np.exp(1j * theta)


def render_axes_svg(rep, out_path):
    """Draw the cuff-holonomy axes in the Poincare disk.

    The half-plane picture is mapped by the Cayley transform
    z -> (z - i)/(z + i); outputs are deterministic (fixed hash salt, no
    date metadata).
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        fig, ax = plt.subplots(figsize=(5.0, 5.0))
        ax.add_patch(plt.Circle((0.0, 0.0), 1.0, fill=False,
                                color="black", linewidth=1.0))
        for c in range(len(rep.pd.cuffs)):
            att, rep_pt = fixed_points(cuff_holonomy(rep, c))
            z = _geodesic_points(rep_pt, att)
            w = (z - 1j) / (z + 1j)
            ax.plot(w.real, w.imag, linewidth=1.2,
                    label=rep.word_string(rep.cuff_words[c]))
        ax.set_xlim(-1.05, 1.05)
        ax.set_ylim(-1.05, 1.05)
        ax.set_aspect("equal")
        ax.axis("off")
        ax.legend(loc="lower left", fontsize=7, frameon=False)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)


# -- subcommand handlers ------------------------------------------------


def _cmd_pants_build(args):
    lengths = tuple(float(x) for x in args.lengths.split(","))
    if len(lengths) != 3:
        raise ValueError(
            f"--lengths needs three comma-separated values, got "
            f"{args.lengths!r}")
    branch = PantsBranch[args.branch.upper()]
    rep = build_pants_rep(lengths, args.epsilon, branch)
    _emit(_dumps(_pants_rep_dict(rep)), args.out)
    return 0


def _cmd_pants_classify(args):
    rep = PantsRep.from_json(_read(args.rep))
    _emit(classify_pants_rep(rep).value, args.out)
    return 0


def _cmd_pants_fold(args):
    rep = fold_pants(PantsRep.from_json(_read(args.rep)))
    _emit(_dumps(_pants_rep_dict(rep)), args.out)
    return 0


def _cmd_pants_unfold(args):
    rep = unfold_pants(PantsRep.from_json(_read(args.rep)))
    _emit(_dumps(_pants_rep_dict(rep)), args.out)
    return 0


def _cmd_surface_assemble(args):
    pd, fn = _load_surface(args.surface)
    rep = assemble_fuchsian(pd, fn)
    _emit(_rep_dump(rep, pd, fn), args.out)
    return 0


def _cmd_fold(args):
    pd, fn = _load_surface(args.surface)
    labels = _load_labels(args, pd)
    _, rho = fold_surface(pd, fn, labels)
    _emit(_rep_dump(rho, pd, fn, labels), args.out)
    return 0


def _cmd_euler(args):
    rep = _load_rep_dump(args.rep)
    _emit(str(euler_class_surface(rep)), args.out)
    return 0


def _cmd_spectrum(args):
    j = _load_rep_dump(args.rep)
    rho = _load_rep_dump(args.rho) if args.rho is not None else j
    letters = _budgeted_probe_letters(j, args.max_word_len)
    words = enumerate_words(len(letters), args.max_word_len)
    records, _ = ratio_spectrum(j, rho, words, generator_letters=letters)
    _emit(spectrum_csv(records, j.names), args.out)
    return 0


def _finish_certificate(cert, args, rep_for_svg):
    _emit(cert.to_json(), args.out)
    if args.csv is not None:
        _emit(cert.to_csv(), args.csv)
    if args.svg is not None:
        render_axes_svg(rep_for_svg, args.svg)
    return 0 if cert.verdict is Verdict.STRICTLY_DOMINATED else 1


def _cmd_certify_fold(args):
    pd, fn = _load_surface(args.surface)
    cert = strictly_dominated_fold(pd, fn, args.euler, args.shrink,
                                   args.max_word_len)
    return _finish_certificate(cert, args, assemble_fuchsian(pd, fn))


def _cmd_certify_unfold(args):
    pd, fn = _load_surface(args.surface)
    labels = _load_labels(args, pd)
    cert = dominating_fuchsian(pd, fn, labels, args.lengthen,
                               args.max_word_len)
    return _finish_certificate(cert, args, assemble_fuchsian(pd, fn))


def _cmd_axes_svg(args):
    rep = _load_rep_dump(args.rep)
    render_axes_svg(rep, args.out)
    return 0


# -- parser -------------------------------------------------------------


def _add_out(parser):
    parser.add_argument("--out", help="output file (default: stdout)")


def _add_labels_group(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--labels", help="labeling JSON file")
    group.add_argument("--euler", type=int,
                       help="target Euler class (labeling prescribed)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="foldrep",
        description="Fuchsian assemblies, folded representations, and "
                    "domination certificates in PSL(2,R).")
    sub = parser.add_subparsers(dest="command", required=True)

    pants = sub.add_parser("pants", help="pair-of-pants representations")
    psub = pants.add_subparsers(dest="subcommand", required=True)

    build = psub.add_parser("build", help="normal-form representation")
    build.add_argument("--lengths", required=True,
                       help="boundary lengths a,b,c")
    build.add_argument("--epsilon", required=True, type=int,
                       choices=(1, -1))
    build.add_argument("--branch", default="generic",
                       choices=("generic", "upper", "lower", "diagonal"))
    _add_out(build)
    build.set_defaults(func=_cmd_pants_build)

    classify = psub.add_parser("classify", help="conjugacy class name")
    classify.add_argument("--rep", required=True,
                          help="pants representation JSON file")
    _add_out(classify)
    classify.set_defaults(func=_cmd_pants_classify)

    pfold = psub.add_parser(
        "fold", help="nongeometric rep with the same boundary lengths")
    pfold.add_argument("--rep", required=True)
    _add_out(pfold)
    pfold.set_defaults(func=_cmd_pants_fold)

    punfold = psub.add_parser(
        "unfold", help="geometric rep with the same boundary lengths")
    punfold.add_argument("--rep", required=True)
    _add_out(punfold)
    punfold.set_defaults(func=_cmd_pants_unfold)

    surface = sub.add_parser("surface", help="surface representations")
    ssub = surface.add_subparsers(dest="subcommand", required=True)
    assemble = ssub.add_parser(
        "assemble", help="Fuchsian holonomy from a surface file")
    assemble.add_argument("--surface", required=True,
                          help="decomposition + coordinates JSON file")
    _add_out(assemble)
    assemble.set_defaults(func=_cmd_surface_assemble)

    fold = sub.add_parser(
        "fold", help="folded representation along a labeling")
    fold.add_argument("--surface", required=True)
    _add_labels_group(fold)
    _add_out(fold)
    fold.set_defaults(func=_cmd_fold)

    euler = sub.add_parser("euler", help="Euler class of a dumped rep")
    euler.add_argument("--rep", required=True,
                       help="representation dump JSON file")
    _add_out(euler)
    euler.set_defaults(func=_cmd_euler)

    spectrum = sub.add_parser(
        "spectrum", help="length-spectrum ratio table (CSV)")
    spectrum.add_argument("--rep", required=True,
                          help="dominating representation dump")
    spectrum.add_argument("--rho", help="dominated representation dump "
                          "(default: the --rep itself)")
    spectrum.add_argument("--max-word-len", required=True, type=int)
    _add_out(spectrum)
    spectrum.set_defaults(func=_cmd_spectrum)

    certify = sub.add_parser(
        "certify", help="numerical strict-domination certificates")
    csub = certify.add_subparsers(dest="subcommand", required=True)

    cfold = csub.add_parser(
        "fold",
        help="Fuchsian assembly vs fold of its cuff-shrunk deformation")
    cfold.add_argument("--surface", required=True)
    cfold.add_argument("--euler", required=True, type=int)
    cfold.add_argument("--shrink", required=True, type=float)
    cfold.add_argument("--max-word-len", required=True, type=int)
    _add_out(cfold)
    cfold.add_argument("--csv", help="also write the spectrum CSV")
    cfold.add_argument("--svg", help="also render the cuff axes figure")
    cfold.set_defaults(func=_cmd_certify_fold)

    cunfold = csub.add_parser(
        "unfold-direction",
        help="cuff-lengthened Fuchsian assembly vs fold of the original")
    cunfold.add_argument("--surface", required=True)
    _add_labels_group(cunfold)
    cunfold.add_argument("--lengthen", required=True, type=float)
    cunfold.add_argument("--max-word-len", required=True, type=int)
    _add_out(cunfold)
    cunfold.add_argument("--csv", help="also write the spectrum CSV")
    cunfold.add_argument("--svg", help="also render the cuff axes figure")
    cunfold.set_defaults(func=_cmd_certify_unfold)

    axes = sub.add_parser(
        "axes-svg", help="cuff-holonomy axes in the Poincare disk")
    axes.add_argument("--rep", required=True,
                      help="representation dump JSON file")
    axes.add_argument("--out", required=True, help="SVG output path")
    axes.set_defaults(func=_cmd_axes_svg)

    return parser


def run(argv):
    args = build_parser().parse_args(argv)
    return args.func(args)


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    try:
        return run(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
        return 0 if code in (None, 0) else 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
