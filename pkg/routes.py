"""
Command Routes
==============
All subcommand handlers for the extkit command line.

Each handler takes the parsed arguments and returns a Report; errors are
raised as ExtkitError and turned into exit codes by app.py.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from algebra.cohomology import Cochain, abelian_invariants
from algebra.crossed_modules import build_GS, decompose, enlarge, obstruction_Q, reduce_to_abelian, validate_crossed_module
from algebra.errors import KernelMismatch, ValidationError
from algebra.ext_automorphisms import (
    aut_preserving,
    center_cocycles,
    check_wells_cocycle_law,
    compatible_pair,
    compatible_pairs,
    gauge_group,
    lift_group_action,
    lift_pair,
    wells_cocycle,
)
from algebra.factor_systems import FactorSystem, build_extension, equivalent, is_split, splitting_cochain
from algebra.groups import Automorphism, FiniteGroup, automorphism_group, center, homomorphisms, inner_and_outer
from algebra.kernels import GKernel, characteristic_class, classify, kernel_from_action, kernels, make_kernel
from catalog import catalog_names, group_from_text, identify, named_group
from data_models import Report
from extkit_config import DEFAULTS
from serialization import (
    dump_factor_system,
    dump_group,
    load_crossed_module,
    load_factor_system,
    load_group_action,
    load_kernel,
    load_pair,
)

logger = logging.getLogger(__name__)


def _rows(array) -> List:
    return np.asarray(array).tolist()


def _entries(c: Cochain) -> Dict[str, int]:
    """Non-identity values of a cochain keyed by "g1,g2,..."."""
    return {",".join(str(int(i)) for i in index): int(c.values[tuple(index)]) for index in np.argwhere(c.values != 0)}


def _kernel_provenance(k: GKernel) -> Dict[str, Any]:
    return {'s': list(k.s), 'lift': _rows(k.lift.act)}


def _fs_provenance(fs: FactorSystem) -> Dict[str, Any]:
    return {'lift': _rows(fs.lift.act), 'omega': _entries(fs.omega)}


def register_commands(subparsers, session):
    """
    Register all subcommands with the argument parser.

    Args:
        subparsers: argparse sub-parser collection of the top-level parser
        session: Session holding configuration, bounds and the Aut cache
    """

    def group(text: str) -> FiniteGroup:
        return group_from_text(text, session.max_order)

    def read(path: str) -> str:
        return Path(path).read_text()

    def kernel(G: FiniteGroup, N: FiniteGroup, s_arg: str) -> GKernel:
        """s-files are keywords, index:<k>, or kernel documents over the same groups."""
        outer = inner_and_outer(N, session.max_order, session.cache)
        if s_arg in ('trivial', 'central'):
            return make_kernel(G, N, [0] * G.order, outer)
        if s_arg == 'inversion':
            if not N.is_abelian:
                raise ValidationError("inversion is an automorphism only for abelian N")
            to_c2 = next((h for h in homomorphisms(G, named_group('C2')) if np.any(h.image)), None)
            if to_c2 is None:
                raise ValidationError("G has no homomorphism onto C2")
            inversion = Automorphism(N, N.inverses)
            S = [inversion if flip else Automorphism.identity(N) for flip in to_c2.image]
            return kernel_from_action(G, N, S, outer)
        if s_arg.startswith('index:'):
            found = kernels(G, N, outer)
            try:
                return found[int(s_arg[len('index:'):])]
            except (ValueError, IndexError):
                raise ValidationError(f"{s_arg} does not name one of the {len(found)} kernels") from None
        k = load_kernel(read(s_arg), session.max_order, session.cache)
        if k.G != G or k.N != N:
            raise KernelMismatch("kernel document is over different groups")
        return k

    def factor_system(path: str) -> FactorSystem:
        return load_factor_system(read(path), session.max_order)

    # ------------------------------------------------------------------ group

    def group_info(args) -> Report:
        G = group(args.group)
        outer = inner_and_outer(G, session.max_order, session.cache)
        result = {
            'order': G.order,
            'name': identify(G, session.max_order),
            'abelian': G.is_abelian,
            'center': center(G).order,
            'aut': len(outer.automorphisms),
            'inn': len(outer.inn),
            'out': outer.out_order,
            'fingerprint': G.fingerprint,
        }
        if G.is_abelian:
            result['invariant_factors'] = list(abelian_invariants(G)[0])
        if args.out:
            Path(args.out).write_text(dump_group(G))
        return Report(['group', 'info', args.group], result)

    # ----------------------------------------------------------------- kernel

    def kernel_check(args) -> Report:
        k = kernel(group(args.G), group(args.N), args.s)
        result = {
            'valid': True,
            'out_order': k.outer.out_order,
            'homomorphic_lift': k.lift.is_homomorphism(),
        }
        return Report(['kernel', 'check', args.G, args.N, args.s], result, _kernel_provenance(k))

    def kernel_obstruction(args) -> Report:
        k = kernel(group(args.G), group(args.N), args.s)
        chi = characteristic_class(k, verify=not args.fast, rng=session.rng())
        result = {
            'h3_invariants': list(chi.group.invariants),
            'chi': list(chi.coords),
            'obstructed': not chi.is_zero(),
        }
        return Report(['kernel', 'obstruction', args.G, args.N, args.s], result, _kernel_provenance(k))

    # -------------------------------------------------------------------- ext

    def ext_classify(args) -> Report:
        k = kernel(group(args.G), group(args.N), args.s)
        classification = classify(k, verify=not args.fast)
        result: Dict[str, Any] = {
            'obstructed': classification.obstructed,
            'chi': list(classification.obstruction.coords),
            'classes': len(classification),
        }
        provenance = _kernel_provenance(k)
        if not classification.obstructed:
            result['h2_invariants'] = list(classification.h2.invariants)
            result['coordinates'] = [list(c) for c in classification.coordinates]
            result['totals'] = [identify(e.total, session.max_order) or f"order {e.total.order}"
                                for e in classification.extensions]
            provenance['base_omega'] = _entries(classification.base.omega)
            if args.write:
                out = Path(args.write)
                out.mkdir(parents=True, exist_ok=True)
                for i, fs in enumerate(classification.classes):
                    (out / f"class{i}.fs").write_text(dump_factor_system(fs))
        return Report(['ext', 'classify', args.G, args.N, args.s], result, provenance)

    def ext_build(args) -> Report:
        G, N = group(args.G), group(args.N)
        fs = factor_system(args.fs)
        if fs.G != G or fs.N != N:
            raise KernelMismatch("factor system document is over different groups")
        ext = build_extension(fs)
        result = {
            'order': ext.total.order,
            'name': identify(ext.total, session.max_order),
            'table': _rows(ext.total.table),
        }
        if args.out:
            Path(args.out).write_text(dump_group(ext.total))
        return Report(['ext', 'build', args.G, args.N, args.fs], result, _fs_provenance(fs))

    def ext_equiv(args) -> Report:
        fs1, fs2 = factor_system(args.e1), factor_system(args.e2)
        witness = equivalent(fs1, fs2)
        result = {'equivalent': witness is not None}
        if witness is not None:
            result['witness'] = _rows(witness.values)
        return Report(['ext', 'equiv', args.e1, args.e2], result)

    def ext_split(args) -> Report:
        fs = factor_system(args.e)
        section = is_split(fs, session.budget)
        result: Dict[str, Any] = {'split': section is not None}
        if section is not None:
            ext = build_extension(fs)
            result['section'] = _rows(section.image)
            result['splitting_cochain'] = _rows(splitting_cochain(ext, section).values)
        return Report(['ext', 'split', args.e], result, _fs_provenance(fs))

    # --------------------------------------------------------------- crossmod

    def crossmod_check(args) -> Report:
        cm = load_crossed_module(read(args.file), session.max_order)
        report = validate_crossed_module(cm)
        result: Dict[str, Any] = {'valid': report.valid, 'checks': report.checks}
        if report.witnesses:
            result['witnesses'] = {name: list(w) for name, w in report.witnesses.items()}
        if report.valid:
            result['kernel'] = list(report.kernel.elements)
            result['image'] = list(report.image.elements)
        return Report(['crossmod', 'check', args.file], result)

    def crossmod_obstruct(args) -> Report:
        cm = load_crossed_module(read(args.file), session.max_order)
        data = decompose(cm)
        chi = obstruction_Q(data, verify=not args.fast, rng=session.rng())
        result = {
            'quotient_order': cm.G.order // data.N.order,
            'h3_invariants': list(chi.group.invariants),
            'obstruction': list(chi.coords),
            'obstructed': not chi.is_zero(),
        }
        provenance = {'f': _entries(data.f), 'theta': _rows(data.theta)}
        return Report(['crossmod', 'obstruct', args.file], result, provenance)

    def crossmod_enlarge(args) -> Report:
        cm = load_crossed_module(read(args.file), session.max_order)
        data = decompose(cm)
        enlargement = enlarge(data)
        result: Dict[str, Any] = {'enlarged': enlargement is not None}
        if enlargement is not None:
            result['cocycle'] = _entries(enlargement.cocycle)
            result['order'] = enlargement.extension.total.order
        return Report(['crossmod', 'enlarge', args.file], result, {'f': _entries(data.f)})

    # --------------------------------------------------------------------- gs

    def gs_build(args) -> Report:
        k = load_kernel(read(args.kernel), session.max_order, session.cache)
        gs = build_GS(k, verify=not args.fast, rng=session.rng())
        result = {
            'order': gs.group.order,
            'name': identify(gs.group, session.max_order),
            'psi_injective': gs.psi_is_injective(),
            'crossed_module_valid': validate_crossed_module(gs.crossed).valid,
        }
        return Report(['gs', 'build', args.kernel], result, _kernel_provenance(k))

    def gs_reduce(args) -> Report:
        fs = factor_system(args.ext)
        k = kernel_from_action(fs.G, fs.N, fs.lift.S, bound=session.max_order, cache=session.cache)
        gs = build_GS(k, verify=not args.fast, rng=session.rng())
        reduced = reduce_to_abelian(build_extension(fs), gs)
        result = {
            'gs_order': gs.group.order,
            'center_order': reduced.factor_system.N.order,
            'gamma': _rows(reduced.gamma.image),
            'reduced_omega': _entries(reduced.factor_system.omega),
        }
        return Report(['gs', 'reduce', args.ext], result, _fs_provenance(fs))

    # -------------------------------------------------------------------- aut

    def aut_list(args) -> Report:
        fs = factor_system(args.ext)
        ext = build_extension(fs)
        auts_n = automorphism_group(fs.N, session.max_order, session.cache)
        auts_g = automorphism_group(fs.G, session.max_order, session.cache)
        found = aut_preserving(ext, auts_n, auts_g, session.max_order, session.budget, session.cache,
                               oracle=args.oracle)
        pairs = compatible_pairs(fs, auts_n, auts_g)
        result = {
            'aut_preserving': len(found),
            'compatible_pairs': len(pairs),
            'liftable_pairs': len({(a.phi.key, a.psi.key) for a in found}),
            'center_cocycles': len(center_cocycles(fs, session.budget)),
            'automorphisms': [_rows(a.nu.forward) for a in found] if args.full else [],
        }
        return Report(['aut', 'list', args.ext], result, _fs_provenance(fs))

    def aut_wells(args) -> Report:
        fs = factor_system(args.ext)
        ext = build_extension(fs)
        phi, psi = load_pair(read(args.pair), fs.N, fs.G)
        pair = compatible_pair(phi, psi, fs)
        result: Dict[str, Any] = {'compatible': pair is not None}
        if pair is not None:
            wells = wells_cocycle(pair, fs)
            lifted = lift_pair(pair, fs, ext)
            result['h2_invariants'] = list(wells.group.invariants)
            result['wells'] = list(wells.coords)
            result['liftable'] = lifted is not None
            result['cocycle_law'] = check_wells_cocycle_law([pair], fs)
            if lifted is not None:
                result['lift'] = _rows(lifted.nu.forward)
        return Report(['aut', 'wells', args.ext, args.pair], result, _fs_provenance(fs))

    def aut_gauge(args) -> Report:
        fs = factor_system(args.ext)
        gauge = gauge_group(build_extension(fs), session.budget, bound=session.max_order, cache=session.cache)
        result = {
            'gauge_order': gauge.order,
            'monoid_size': len(gauge.monoid),
            'from_automorphisms': len(gauge.automorphisms),
        }
        return Report(['aut', 'gauge', args.ext], result, _fs_provenance(fs))

    def aut_liftaction(args) -> Report:
        fs = factor_system(args.ext)
        ext = build_extension(fs)
        H = group(args.H)
        pairs = load_group_action(read(args.psi), H, fs.N, fs.G)
        lifted = lift_group_action(H, pairs, fs, ext, session.budget)
        result: Dict[str, Any] = {
            'lifts': lifted.lifts,
            'h2_invariants': list(lifted.obstruction.group.invariants),
            'obstruction': list(lifted.obstruction.coords),
        }
        if lifted.lifts:
            result['action'] = [_rows(a.forward) for a in lifted.action]
        return Report(['aut', 'liftaction', args.ext, args.H, args.psi], result, _fs_provenance(fs))

    # ----------------------------------------------------------------- config

    def config_init(args) -> Report:
        path = session.config.config_file
        created = not os.path.exists(path)
        if created:
            session.config.create_default_config()
            logger.info("wrote default settings to %s", path)
        return Report(['config', 'init'], {'path': path, 'created': created})

    def config_show(args) -> Report:
        settings = {name: session.config.get(name) for name in DEFAULTS}
        result = {'path': session.config.config_file, 'exists': os.path.exists(session.config.config_file),
                  'settings': settings}
        return Report(['config', 'show'], result)

    # ----------------------------------------------------------------- search

    def search_obstructed(args) -> Report:
        found = []
        checked = 0
        for g_name in catalog_names(args.gmax):
            G = named_group(g_name)
            for n_name in catalog_names(args.nmax):
                N = named_group(n_name)
                outer = inner_and_outer(N, session.max_order, session.cache)
                for index, k in enumerate(kernels(G, N, outer)):
                    checked += 1
                    chi = characteristic_class(k, verify=False)
                    if not chi.is_zero():
                        found.append({'G': g_name, 'N': n_name, 'kernel': f"index:{index}",
                                      's': list(k.s), 'chi': list(chi.coords)})
        logger.info("checked %d kernels, %d obstructed", checked, len(found))
        result = {'kernels_checked': checked, 'obstructed': found}
        return Report(['search', 'obstructed', f"--gmax={args.gmax}", f"--nmax={args.nmax}"], result)

    # ---------------------------------------------------------------- parsers

    def command(parent, name: str, handler, help_text: str, *arguments: str):
        parser = parent.add_parser(name, help=help_text)
        for argument in arguments:
            parser.add_argument(argument)
        parser.set_defaults(handler=handler)
        return parser

    group_parser = subparsers.add_parser('group', help='finite groups').add_subparsers(dest='action', required=True)
    info = command(group_parser, 'info', group_info, 'order, center and Aut/Inn/Out sizes', 'group')
    info.add_argument('--out', help='write the group document to this path')

    kernel_parser = subparsers.add_parser('kernel', help='G-kernels').add_subparsers(dest='action', required=True)
    command(kernel_parser, 'check', kernel_check, 'validate a kernel', 'G', 'N', 's')
    obstruction = command(kernel_parser, 'obstruction', kernel_obstruction, 'characteristic class in H^3', 'G', 'N', 's')
    obstruction.add_argument('--fast', action='store_true', help='skip independence checks')

    ext_parser = subparsers.add_parser('ext', help='extensions').add_subparsers(dest='action', required=True)
    classify_parser = command(ext_parser, 'classify', ext_classify, 'classify extensions of a kernel', 'G', 'N', 's')
    classify_parser.add_argument('--fast', action='store_true', help='skip independence checks')
    classify_parser.add_argument('--write', help='directory receiving one factor-system document per class')
    build = command(ext_parser, 'build', ext_build, 'Cayley table of N x_(S, w) G', 'G', 'N', 'fs')
    build.add_argument('--out', help='write the total group document to this path')
    command(ext_parser, 'equiv', ext_equiv, 'equivalence of two factor systems', 'e1', 'e2')
    command(ext_parser, 'split', ext_split, 'search for a homomorphic section', 'e')

    cm_parser = subparsers.add_parser('crossmod', help='crossed modules').add_subparsers(dest='action', required=True)
    command(cm_parser, 'check', crossmod_check, 'validate the crossed module axioms', 'file')
    obstruct = command(cm_parser, 'obstruct', crossmod_obstruct, 'obstruction in H^3(G/N, Z)', 'file')
    obstruct.add_argument('--fast', action='store_true', help='skip independence checks')
    command(cm_parser, 'enlarge', crossmod_enlarge, 'enlarge the central extension to G', 'file')

    gs_parser = subparsers.add_parser('gs', help='the group G^S').add_subparsers(dest='action', required=True)
    for name, handler, argument, help_text in (('build', gs_build, 'kernel', 'build G^S for a kernel document'),
                                               ('reduce', gs_reduce, 'ext', 'reduce an extension to Z(N) over G^S')):
        parser = command(gs_parser, name, handler, help_text, argument)
        parser.add_argument('--fast', action='store_true', help='skip independence checks')

    aut_parser = subparsers.add_parser('aut', help='automorphisms of extensions').add_subparsers(dest='action', required=True)
    listing = command(aut_parser, 'list', aut_list, 'Aut(G^, N) via compatible pairs', 'ext')
    listing.add_argument('--oracle', action='store_true', help='cross-check against filtered Aut(G^)')
    listing.add_argument('--full', action='store_true', help='include every automorphism in the result')
    command(aut_parser, 'wells', aut_wells, 'Wells class of a compatible pair', 'ext', 'pair')
    command(aut_parser, 'gauge', aut_gauge, 'gauge group two ways', 'ext')
    command(aut_parser, 'liftaction', aut_liftaction, 'lift an action of H to the extension', 'ext', 'H', 'psi')

    search_parser = subparsers.add_parser('search', help='sweeps').add_subparsers(dest='action', required=True)
    obstructed = command(search_parser, 'obstructed', search_obstructed, 'kernels with nonzero characteristic class')
    obstructed.add_argument('--gmax', type=int, default=4)
    obstructed.add_argument('--nmax', type=int, default=8)

    config_parser = subparsers.add_parser('config', help='settings file').add_subparsers(dest='action', required=True)
    command(config_parser, 'init', config_init, 'write extkit.xml with defaults if missing')
    command(config_parser, 'show', config_show, 'effective settings')
