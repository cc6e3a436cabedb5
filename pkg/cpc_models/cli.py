"""Command-line front end: cpc-models <subcommand> [options]

Reports go to --output (stdout by default) as one JSON object per line, or
as aligned tables with --format human. Every report echoes the subcommand
and the seed. Exit status is 0 on success, 2 when an input fails
validation and 1 when an internal invariant is violated.
"""
import logging
import math
import os
import sys
from collections import namedtuple
from fractions import Fraction

import click
import numpy as np

from cpc_models import __version__
from cpc_models.commands import Command
from cpc_models.config_manager import (DEFAULT_SEED, DEFAULT_CLOCK_PRECISION,
                                       DEFAULT_WORK_BUDGET_LOG2)
from cpc_models.exceptions import ValidationError, InvariantViolation
from cpc_models.grover import demo_report
from cpc_models.linalg import (RandomSource, basis_state, bloch_angle,
                               sample_outcomes)
from cpc_models.model_io import (read_model, write_model, read_counts,
                                 read_eval_commands)
from cpc_models.model_lattice import (BUILTIN_PROPERTIES, classify_fit,
                                      filter_models)
from cpc_models.model_stats import (WeightedCommandSet,
                                    distinguishability_report,
                                    min_sample_size, orthogonal_perfect_fit,
                                    relative_frequencies, verification_cost,
                                    weighted_model_distance)
from cpc_models.models import mimic_models, outcome_probabilities
from cpc_models.precision_grid import GridQuery, blind_search_verdict
from cpc_models.reports import BoundReport, render
from cpc_models.timing import (TimingBudget, simulate_mistimed_not,
                               timing_report)


logger = logging.getLogger(__name__)

RunConfig = namedtuple('RunConfig', ['subcommand', 'seed', 'output_path',
                                     'format'])

# most specific first
EXIT_CODES = [(ValidationError, 2),
              (InvariantViolation, 1)]


class ModelsGroup(click.Group):
    """A click group mapping package exceptions onto exit statuses"""
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except tuple(exc for exc, _ in EXIT_CODES) as e:
            code = next(code for exc, code in EXIT_CODES
                        if isinstance(e, exc))
            click.echo('Error: %s' % e, err=True)
            logger.debug("exiting with status %d", code, exc_info=True)
            ctx.exit(code)


def _record(item):
    if hasattr(item, 'to_record'):
        return dict(item.to_record())
    return dict(item)


def _run_config():
    return click.get_current_context().find_object(RunConfig)


def emit(records):
    """Write records to the configured output in the configured format"""
    config = _run_config()
    rows = []
    for item in records:
        row = _record(item)
        row['subcommand'] = config.subcommand
        row['seed'] = config.seed
        rows.append(row)

    text = render(rows, config.format)
    with click.open_file(config.output_path, 'w') as fp:
        fp.write(text)


@click.group(cls=ModelsGroup)
@click.version_option(__version__)
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1),
              default=DEFAULT_SEED, show_default=True,
              help='Seed for every random draw.')
@click.option('--output', 'output_path', default='-',
              type=click.Path(dir_okay=False, writable=True, allow_dash=True),
              help='Report destination, stdout by default.')
@click.option('--format', 'fmt', type=click.Choice(['json', 'human']),
              default='json', show_default=True,
              help='json writes one object per line with sorted keys.')
@click.option('--verbose', is_flag=True, help='Log at DEBUG to stderr.')
@click.pass_context
def cli(ctx, seed, output_path, fmt, verbose):
    """Simulate and verify command-addressed quantum models."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        stream=sys.stderr, force=True,
                        format='%(levelname)s %(name)s: %(message)s')
    ctx.obj = RunConfig(ctx.invoked_subcommand, seed, output_path, fmt)


@cli.command('grover-demo')
@click.option('--n-bits', type=click.IntRange(1, 12), default=4,
              show_default=True)
@click.option('--perturbed', is_flag=True,
              help='Diffuse about the uniform state with |0> removed.')
@click.option('--iterations', type=click.IntRange(0), default=None,
              help='Rounds to run [default: floor(pi/4 sqrt(N))].')
def grover_demo(n_bits, perturbed, iterations):
    """Quantum search with exact or perturbed diffusion."""
    emit(demo_report(n_bits, perturbed, iterations))


@cli.command('sample-size')
@click.option('--n-bits', type=click.IntRange(1), default=10,
              show_default=True)
@click.option('--table', is_flag=True,
              help='One row for every n from 1 to --n-bits.')
@click.option('--epsilon', type=float, default=None,
              help='Report the trials needed to resolve this distance; '
              'bounds within float round-off of an integer snap to it.')
def sample_size(n_bits, table, epsilon):
    """Trials needed to verify a gate command to search precision."""
    if epsilon is not None:
        emit([BoundReport('min_sample_size',
                          [('epsilon', epsilon),
                           ('min_sample_size', min_sample_size(epsilon))])])
    elif table:
        emit([verification_cost(n) for n in range(1, n_bits + 1)])
    else:
        emit([verification_cost(n_bits)])


@cli.command()
@click.option('--n-bits', type=click.IntRange(1), default=100,
              show_default=True)
@click.option('--clock-precision', type=float,
              default=DEFAULT_CLOCK_PRECISION, show_default=True,
              help='Relative precision of the best available clock.')
@click.option('--epsilon', type=float, default=None,
              help='Gate precision [default: 2^(1 - n/2)].')
@click.option('--t-not', type=float, default=None,
              help='NOT duration in seconds; simulates a mistimed NOT.')
@click.option('--delta-t', type=float, default=0.0, show_default=True,
              help='Timing error in seconds for the simulated NOT.')
def timing(n_bits, clock_precision, epsilon, t_not, delta_t):
    """Timing precision a search needs, against clock precision."""
    records = [timing_report(n_bits, clock_precision, epsilon)]
    if t_not is not None:
        budget = TimingBudget(t_not, delta_t)
        state, angle_error = simulate_mistimed_not(budget, basis_state(2, 0))
        records.append(BoundReport('mistimed_not', [
            ('t_not', budget.t_not), ('delta_t', budget.delta_t),
            ('relative_error', budget.relative_error),
            ('omega', budget.omega), ('angle_error', angle_error),
            ('bloch_angle_to_target', bloch_angle(state, basis_state(2, 1)))]))
    emit(records)


def _parse_ratio(value):
    """log2(eps / eps') from 'sqrt2', '2^k' or a plain number"""
    value = value.strip()
    if value == 'ratchet':
        return None
    if value == 'sqrt2':
        return Fraction(1, 2)
    try:
        if value.startswith('2^'):
            return Fraction(value[2:])
        ratio = float(value)
    except ValueError:
        raise click.BadParameter("expected sqrt2, ratchet, 2^k or a number, "
                                 "got %r" % value) from None
    if not ratio > 1:
        raise ValidationError("ratio eps/eps' must exceed 1, got %r" % value)
    return math.log2(ratio)


def _parse_budget(value):
    value = value.strip()
    try:
        if value.startswith('2^'):
            return float(value[2:])
        return math.log2(float(value))
    except ValueError:
        raise click.BadParameter("expected 2^k or a number, got %r" % value) \
            from None


@cli.command('grid-cost')
@click.option('--n-bits', type=click.IntRange(1), default=5,
              show_default=True)
@click.option('--ratio', default='sqrt2', show_default=True,
              help="eps/eps' as sqrt2, 2^k or a number; 'ratchet' uses the "
                   "step from n-1 to n bit search precision.")
@click.option('--gates', type=click.IntRange(1), default=1,
              show_default=True, help='Gate commands to improve.')
@click.option('--budget', default='2^%d' % DEFAULT_WORK_BUDGET_LOG2,
              show_default=True,
              help='Work beyond which blind search is called hopeless.')
@click.option('--trials', type=click.IntRange(1), default=None,
              help="Trials per tested command [default: min sample size "
                   "at eps'].")
def grid_cost(n_bits, ratio, gates, budget, trials):
    """Grid points and work for a blind search for better gates."""
    ratio_log2 = _parse_ratio(ratio)
    if ratio_log2 is None:
        query = GridQuery.ratchet(n_bits, gates)
    else:
        query = GridQuery.from_ratio(n_bits, ratio_log2, n_gates=gates)
    emit([blind_search_verdict(query, trials, _parse_budget(budget))])


def _sampled_counts(model, commands, n_trials, seed):
    source = RandomSource(seed)
    counts = {}
    for command, child in zip(commands, source.spawn(len(commands))):
        counts[command] = sample_outcomes(outcome_probabilities(model,
                                                                command),
                                          n_trials, child)
    return counts


@cli.command()
@click.argument('model_a', type=click.Path(exists=True, dir_okay=False))
@click.argument('model_b', type=click.Path(exists=True, dir_okay=False))
@click.option('--counts', 'counts_path', default=None,
              type=click.Path(exists=True, dir_okay=False),
              help='Measured counts (CSV: command, count per outcome).')
@click.option('--n-trials', type=click.IntRange(1), default=None,
              help='Without --counts, sample this many trials per command '
                   'from MODEL_B.')
def distinguish(model_a, model_b, counts_path, n_trials):
    """Distances between two models and the data, with verdicts."""
    alpha = read_model(model_a)
    beta = read_model(model_b)
    if counts_path is not None:
        counts = read_counts(counts_path)
        data_source = 'counts'
    elif n_trials is not None:
        shared = sorted(alpha.commands & beta.commands)
        counts = _sampled_counts(beta, shared, n_trials, _run_config().seed)
        data_source = 'sampled'
    else:
        raise click.UsageError("Give --counts or --n-trials")

    frequencies = relative_frequencies(counts)
    n_by_command = {b: int(np.sum(getattr(c, 'counts', c)))
                    for b, c in counts.items()}
    w = WeightedCommandSet.uniform(sorted(n_by_command))

    records = []
    for pair, first, second in (('a-b', alpha, beta),
                                ('a-data', alpha, frequencies),
                                ('b-data', beta, frequencies)):
        for row in distinguishability_report(first, second, n_by_command):
            row.update({'report': 'distinguish', 'pair': pair})
            records.append(row)
        records.append({'report': 'weighted_distance', 'pair': pair,
                        'data': data_source,
                        'distance': weighted_model_distance(first, second,
                                                            w)})
    emit(records)


def _aux_state(text, dim):
    """Normalized sum of the basis vectors listed as 'i,j,...'"""
    try:
        indices = [int(i) for i in text.split(',') if i.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated basis indices, "
                                 "got %r" % text) from None
    if not indices:
        raise click.BadParameter("no basis indices in %r" % text)
    state = sum(basis_state(dim, i) for i in sorted(set(indices)))
    return state / np.linalg.norm(state)


def _model_path(out_dir, label):
    return os.path.join(out_dir, '%s.json' % label.replace('(', '_')
                        .replace(')', ''))


@cli.command()
@click.argument('model_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--w', 'w_indices', default='0', show_default=True,
              help='Auxiliary state as comma-separated basis indices.')
@click.option('--w-perp', 'w_perp_indices', default='1', show_default=True,
              help='Orthogonal auxiliary state, same notation.')
@click.option('--out-dir', type=click.Path(file_okay=False), default='.',
              show_default=True)
def mimic(model_file, w_indices, w_perp_indices, out_dir):
    """Write two orthogonal models that reproduce MODEL_FILE."""
    model = read_model(model_file)
    w = _aux_state(w_indices, model.dimension)
    w_perp = _aux_state(w_perp_indices, model.dimension)
    first, second = mimic_models(model, w, w_perp)

    deviation = 0.0
    overlap = 0.0
    for b in model.commands:
        p = outcome_probabilities(model, b).probs
        for m in (first, second):
            deviation = max(deviation, float(np.max(np.abs(
                outcome_probabilities(m, b).probs - p))))
        overlap = max(overlap, abs(np.vdot(first.state_for(b),
                                           second.state_for(b))))

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for m in (first, second):
        path = _model_path(out_dir, m.label)
        write_model(m, path)
        paths.append(path)

    emit([BoundReport('mimic', [('input', model_file),
                                ('dimension', first.dimension),
                                ('files', paths),
                                ('max_probability_deviation', deviation),
                                ('max_overlap', overlap)])])


def _parse_frequencies(value):
    try:
        return [float(f) for f in value.split(',')]
    except ValueError:
        raise click.BadParameter("expected comma-separated numbers, got %r"
                                 % value) from None


@cli.command()
@click.option('--freqs', default=None,
              help='Comma-separated relative frequencies for one command.')
@click.option('--counts', 'counts_path', default=None,
              type=click.Path(exists=True, dir_okay=False),
              help='Counts file; fits every command in it.')
@click.option('--out-dir', type=click.Path(file_okay=False), default='.',
              show_default=True)
def orthofit(freqs, counts_path, out_dir):
    """Write two orthogonal models that both fit the frequencies exactly."""
    if (freqs is None) == (counts_path is None):
        raise click.UsageError("Give exactly one of --freqs and --counts")
    if freqs is not None:
        freq_map = {Command(''): _parse_frequencies(freqs)}
    else:
        freq_map = relative_frequencies(read_counts(counts_path))

    alpha, beta = orthogonal_perfect_fit(freq_map)

    deviation = 0.0
    overlap = 0.0
    for b, f in freq_map.items():
        f = getattr(f, 'probs', np.asarray(f))
        for m in (alpha, beta):
            deviation = max(deviation, float(np.max(np.abs(
                outcome_probabilities(m, b).probs - f))))
        overlap = max(overlap, abs(np.vdot(alpha.state_for(b),
                                           beta.state_for(b))))

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for m in (alpha, beta):
        path = _model_path(out_dir, m.label)
        write_model(m, path)
        paths.append(path)

    emit([BoundReport('orthofit', [('dimension', alpha.dimension),
                                   ('commands',
                                    [str(b) for b in sorted(freq_map)]),
                                   ('files', paths),
                                   ('max_frequency_deviation', deviation),
                                   ('max_overlap', overlap)])])


@cli.command()
@click.option('--models', 'model_files', multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help='A model file; repeat for each model.')
@click.option('--data', 'data_path', required=True,
              type=click.Path(exists=True, dir_okay=False),
              help='Counts file of the measured data.')
@click.option('--eps', type=float, required=True,
              help='Models within this weighted distance fit.')
@click.option('--spread-cap', type=float, required=True,
              help='Fitting models further apart than this disagree.')
@click.option('--eval-commands', 'eval_path', default=None,
              type=click.Path(exists=True, dir_okay=False),
              help='Commands for comparing fitting models, one per line '
                   '[default: the data commands].')
@click.option('--property', 'properties', multiple=True,
              type=click.Choice(sorted(BUILTIN_PROPERTIES)),
              help='Keep only models with this property; repeatable.')
def fit(model_files, data_path, eps, spread_cap, eval_path, properties):
    """Classify a model set against data: TooBig, NoFit or Good."""
    models = [read_model(path) for path in model_files]
    for path, m in zip(model_files, models):
        if not m.label:
            m.label = os.path.basename(path)

    models = filter_models(models, [BUILTIN_PROPERTIES[p]
                                    for p in properties])
    data = relative_frequencies(read_counts(data_path))
    w = WeightedCommandSet.uniform(sorted(data))
    eval_commands = (read_eval_commands(eval_path) if eval_path is not None
                     else None)

    report = classify_fit(models, data, w, eps, spread_cap, eval_commands)
    record = report.to_record()
    record['properties'] = list(properties)
    emit([record])


if __name__ == '__main__':
    cli()
