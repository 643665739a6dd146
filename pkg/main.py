"""
Point d'entrée en ligne de commande.

Sous-commandes:
    check      verdicts (SS), (*), anisotropie totale et finitude pour un tuple
    enumerate  classes de tuples primitifs vérifiant (SS) pour un n donné
    tables     tables 1 à 4 (Markdown, CSV ou JSON)
    oracle     contrôle croisé par clôture de groupe pour n = 2
    verify     suite de recette complète

Codes de sortie: 0 succès, 1 verdicts discordants, 2 erreur d'utilisation.
"""

import argparse
import json
import sys
from math import gcd

import pandas as pd

from src.arith.residues import ResidueTuple
from src.classify.reference_tables import TABLE4, diff_table
from src.classify.schwarz_classifier import (
    DEFAULT_DMAX,
    classify_n,
    enumerate_quadruples,
    enumerate_triples,
    is_dihedral_class,
    is_primitive,
)
from src.classify.table_emitter import (
    FORMATS,
    render,
    table1_frame,
    table2_frame,
    table3_frame,
    table4_frame,
)
from src.conditions.fractional_conditions import mu_infinity, satisfies_condition, satisfies_star
from src.exceptions import (
    InconsistentVerdictError,
    InvalidConfigError,
    InvalidTupleError,
    MonodromyError,
)
from src.forms.skew_hermitian import totally_anisotropic
from src.groups.monodromy_group import gassner_generators_n2, group_closure, pgl2_orders
from src.utils.config import MIN_CLOSURE_CAP, load_settings
from src.utils.logger import get_logger
from src.utils.report_manager import SCHEMA_VERSION, ReportManager
from src.verification.acceptance import AcceptanceBounds, run_acceptance

mm_logger = get_logger()
logger = mm_logger.logger

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

ORACLE_DEFAULT_DMAX = 12
DEFAULT_FORMATS = {"tables": "md"}


class MonodromyCLI:
    """Exécute une sous-commande et produit (texte du rapport, code de sortie)."""

    def __init__(self, settings):
        self.settings = settings
        # tables calculées, exportées en CSV à côté du rapport quand --out est donné
        self.exports = []

    # --- utilitaires ---

    @staticmethod
    def _format(args):
        return args.format or DEFAULT_FORMATS.get(args.command, "json")

    def _json(self, command, payload):
        body = {"schema_version": SCHEMA_VERSION, "command": command, **payload}
        return json.dumps(body, ensure_ascii=False, indent=2) + "\n"

    def _cap(self, args):
        cap = args.cap if args.cap is not None else self.settings.closure_cap
        if cap < MIN_CLOSURE_CAP:
            raise InvalidConfigError(f"--cap doit être >= {MIN_CLOSURE_CAP} (reçu {cap})")
        return cap

    def _dmax(self, args, default=None):
        dmax = args.dmax if args.dmax is not None else (default or self.settings.dmax)
        if dmax < 2:
            raise InvalidConfigError(f"--dmax doit être >= 2 (reçu {dmax})")
        return dmax

    def _workers(self, args):
        workers = args.workers if args.workers is not None else self.settings.workers
        if workers < 1:
            raise InvalidConfigError(f"--workers doit être >= 1 (reçu {workers})")
        return workers

    @staticmethod
    def _tuple(args):
        if args.d is None or args.ks is None:
            raise InvalidTupleError("--d et --ks sont requis")
        return ResidueTuple.parse(args.d, args.ks)

    # --- sous-commandes ---

    def check(self, args):
        t = self._tuple(args)
        fmt = self._format(args)
        ss = satisfies_condition(t)
        star = satisfies_star(t)
        aniso = totally_anisotropic(t)
        verdicts = {
            "SS": ss.holds,
            "STAR": star.holds,
            "anisotropy": aniso.totally_anisotropic,
        }
        agree = len(set(verdicts.values())) == 1
        verdicts["monodromy_finite"] = ss.holds
        mu_inf = mu_infinity(t)

        notes = ["finitude déduite du critère (SS) (monodromie dans Aut(M_d))"]
        if t.n >= 3:
            notes.append("pas d'oracle de groupe disponible pour n >= 3")
        if mu_inf.integral:
            notes.append("mu_infinity entier: hors du cadre de l'interprétation en monodromie")
        if not is_primitive(t):
            notes.append("tuple non primitif")

        payload = {
            "tuple": t.to_dict(),
            "primitive": is_primitive(t),
            "verdicts": verdicts,
            "verdicts_agree": agree,
            "mu_infinity": mu_inf.to_dict(),
            "SS": ss.to_dict(),
            "STAR": star.to_dict(),
            "anisotropy": aniso.to_dict(),
            "notes": notes,
        }
        if t.n == 2:
            witness = is_dihedral_class(t.d, *t.ks)
            payload["dihedral"] = witness.to_dict() if witness else None
            payload["pair_sums"] = pgl2_orders(t.d, *t.ks).to_dict()

        if not agree:
            logger.error(f"verdicts discordants pour {t}: {verdicts}")
        code = EXIT_OK if agree else EXIT_MISMATCH

        if fmt == "json":
            return self._json("check", payload), code
        frame = pd.DataFrame(
            [{"criterion": name, "holds": value} for name, value in verdicts.items()],
            columns=["criterion", "holds"],
        )
        return render(frame, fmt, title=f"Vérification de {t}"), code

    def enumerate(self, args):
        if args.n is None:
            raise InvalidTupleError("--n est requis")
        fmt = self._format(args)
        result = classify_n(args.n, self._dmax(args), self._workers(args), progress=args.progress)
        mm_logger.log_data_stats({
            "n": args.n,
            "classes": len(result.classes),
            "classes de Schwarz": len(result.schwarz_classes),
        })
        if fmt == "json":
            return self._json("enumerate", result.to_dict()), EXIT_OK
        frame = pd.DataFrame(
            [
                {"class": str(c.canonical), "orbit_size": c.orbit_size,
                 "members": " ".join(str(m) for m, _ in c.members)}
                for c in result.classes
            ],
            columns=["class", "orbit_size", "members"],
        )
        return render(frame, fmt, title=f"Classes pour n = {args.n}"), EXIT_OK

    def tables(self, args):
        fmt = self._format(args)
        triples = enumerate_triples(self._dmax(args), self._workers(args), progress=args.progress)
        diff = None
        if args.which == 1:
            frame = table1_frame(triples.schwarz_classes)
        elif args.which == 2:
            frame = table2_frame(triples)
        else:
            quads = enumerate_quadruples(triples)
            if args.which == 3:
                frame = table3_frame(quads)
            else:
                frame = table4_frame(quads)
                diff = diff_table({d: [t.ks for t in v] for d, v in quads.candidates_dihedral_shape.items()}, TABLE4)
                if not diff.empty:
                    logger.warning(f"table 4: écarts avec la table imprimée: {diff.to_dict()}")

        self.exports.append((f"table{args.which}", frame))
        title = f"Table {args.which}"
        if fmt == "json":
            payload = {"which": args.which, "rows": json.loads(frame.to_json(orient="records"))}
            if diff is not None:
                payload["diff"] = diff.to_dict()
            return self._json("tables", payload), EXIT_OK
        text = render(frame, fmt, title=title)
        if fmt == "md" and diff is not None and not diff.empty:
            text += "\n### Écarts avec la table imprimée\n\n"
            for label, entries in (("absent du calcul", diff.missing), ("absent de la table", diff.extra)):
                for d, items in sorted(entries.items()):
                    for ks in items:
                        text += f"- d={d} {label}: ({','.join(str(k) for k in ks)})\n"
        return text, EXIT_OK

    def oracle(self, args):
        fmt = self._format(args)
        cap = self._cap(args)
        if args.d is not None or args.ks is not None:
            targets = [self._tuple(args)]
            if targets[0].n != 2:
                raise InvalidTupleError("l'oracle de groupe ne traite que n = 2")
        else:
            dmax = self._dmax(args, default=ORACLE_DEFAULT_DMAX)
            targets = [
                ResidueTuple(d, (k1, k2, k3))
                for d in range(2, dmax + 1)
                for k1 in range(1, d)
                for k2 in range(k1, d)
                for k3 in range(k2, d)
                if gcd(d, k1, k2, k3) == 1
            ]

        rows, disagreements = [], 0
        for t in targets:
            a, b = gassner_generators_n2(t.d, *t.ks)
            closure = group_closure([a, b], cap, detect_infinite_order=True, keep_elements=False)
            expected = satisfies_condition(t).holds
            agree = closure.finite == expected
            disagreements += not agree
            rows.append({
                "tuple": str(t),
                "SS": expected,
                "finite": closure.finite,
                "order": closure.order,
                "reason": closure.reason,
                "agree": agree,
            })
        mm_logger.log_data_stats({"clôtures": len(rows), "désaccords": disagreements})
        code = EXIT_OK if disagreements == 0 else EXIT_MISMATCH
        if fmt == "json":
            return self._json("oracle", {"cap": cap, "results": rows, "disagreements": disagreements}), code
        frame = pd.DataFrame(rows, columns=["tuple", "SS", "finite", "order", "reason", "agree"])
        return render(frame, fmt, title="Oracle de clôture (n = 2)"), code

    def verify(self, args):
        fmt = self._format(args)
        bounds = AcceptanceBounds(
            d_max=self._dmax(args),
            cap=self._cap(args),
            seed=args.seed if args.seed is not None else self.settings.seed,
            workers=self._workers(args),
            progress=args.progress,
        )

        def on_stage(name, starting):
            if starting:
                mm_logger.log_stage_start(f"critère {name}")
            else:
                mm_logger.log_stage_end(f"critère {name}")

        report = run_acceptance(bounds, on_stage=on_stage)
        code = EXIT_OK if report.passed else EXIT_MISMATCH
        if fmt == "json":
            return self._json("verify", report.to_dict()), code
        frame = pd.DataFrame(
            [{"criterion": c.name, "passed": c.passed} for c in report.criteria],
            columns=["criterion", "passed"],
        )
        return render(frame, fmt, title="Recette"), code

    def run(self, args):
        handler = getattr(self, args.command)
        mm_logger.log_stage_start(args.command)
        try:
            text, code = handler(args)
        except Exception:
            mm_logger.log_stage_end(args.command, success=False)
            raise
        mm_logger.log_stage_end(args.command, success=code == EXIT_OK)

        if args.out:
            manager = ReportManager(self.settings.reports_dir)
            manager.write_report(args.command, text, args.out, self._format(args))
            for name, frame in self.exports:
                manager.export_table_csv(name, frame)
            if getattr(args, "verbose", False):
                mm_logger.log_data_stats(manager.get_stats())
        else:
            sys.stdout.write(text)
        return code


def build_parser():
    parser = argparse.ArgumentParser(
        description="Classification des tuples (d; k_1, ..., k_{n+1}) à monodromie finie"
    )
    parser.add_argument("--verbose", action="store_true", help="Logs détaillés (niveau DEBUG)")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="Format du rapport (md, csv, json)")
    common.add_argument("--out", default=None, help="Fichier de sortie (par défaut: sortie standard)")

    tuple_args = argparse.ArgumentParser(add_help=False)
    tuple_args.add_argument("--d", type=int, default=None, help="Dénominateur d >= 2")
    tuple_args.add_argument("--ks", default=None, help="Résidus k_i séparés par des virgules")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--dmax", type=int, default=None, help=f"Borne sur d (par défaut: DMAX, {DEFAULT_DMAX})")
    search.add_argument("--workers", type=int, default=None, help="Nombre de processus (1 = séquentiel)")
    search.add_argument("--progress", action="store_true", help="Barre de progression sur stderr")

    capped = argparse.ArgumentParser(add_help=False)
    capped.add_argument("--cap", type=int, default=None, help="Plafond d'éléments pour la clôture de groupe")

    sub.add_parser("check", parents=[common, tuple_args], help="Verdicts pour un tuple")

    p_enum = sub.add_parser("enumerate", parents=[common, search], help="Classes pour un n donné")
    p_enum.add_argument("--n", type=int, default=None, help="n >= 2 (tuples de longueur n+1)")

    p_tables = sub.add_parser("tables", parents=[common, search], help="Tables 1 à 4")
    p_tables.add_argument("--which", type=int, choices=[1, 2, 3, 4], required=True, help="Numéro de table")

    sub.add_parser("oracle", parents=[common, tuple_args, search, capped],
                   help=f"Clôture de groupe pour n = 2 (par défaut d <= {ORACLE_DEFAULT_DMAX})")

    p_verify = sub.add_parser("verify", parents=[common, search, capped], help="Suite de recette complète")
    p_verify.add_argument("--seed", type=int, default=None, help="Graine des contrôles échantillonnés")
    return parser


def run(argv=None):
    """Analyse les arguments, exécute la sous-commande et renvoie le code de sortie."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        settings = load_settings()
    except InvalidConfigError as e:
        mm_logger.log_exception(e, "Configuration invalide")
        return EXIT_USAGE
    mm_logger.configure("DEBUG" if args.verbose else settings.log_level, settings.log_to_file)
    if args.verbose:
        mm_logger.log_config_status(settings)

    cli = MonodromyCLI(settings)
    try:
        return cli.run(args)
    except (InvalidTupleError, InvalidConfigError) as e:
        mm_logger.log_exception(e, "Erreur d'utilisation")
        return EXIT_USAGE
    except InconsistentVerdictError as e:
        mm_logger.log_exception(e, "Verdicts discordants")
        return EXIT_MISMATCH
    except MonodromyError as e:
        mm_logger.log_exception(e, f"Échec de {args.command}")
        return EXIT_MISMATCH


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
