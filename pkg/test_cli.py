#!/usr/bin/env python3
"""
End-to-end tests of the icckit command line: exit codes, output files and
byte-for-byte reproducibility.
"""

import json
import logging

import pytest

from file_formats import read_json, read_region
from main import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, main, parse_arguments, setup_logging

DEGENERATE_DIST = {
    'family': 'GENERAL_EQ1',
    'factors': {'U0': [1.0], 'U1': [[1.0]], 'U2': [[1.0]],
                'X1': [[[0.5, 0.5]]], 'X2': [[[0.5, 0.5]]]},
}

BINARY_DIST = {
    'family': 'GENERAL_EQ1',
    'factors': {'U0': [0.4, 0.6], 'U1': [[0.3, 0.7], [0.5, 0.5]], 'U2': [[0.9, 0.1], [0.2, 0.8]],
                'X1': [[[0.6, 0.4], [0.1, 0.9]], [[0.5, 0.5], [0.7, 0.3]]],
                'X2': [[[0.2, 0.8], [0.6, 0.4]], [[0.35, 0.65], [0.5, 0.5]]]},
}


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def run(*argv):
    return main(['--no-styling', *argv])


@pytest.fixture
def files(tmp_path):
    """Identity channel, degenerate factorization and an output directory."""
    return {
        'identity': write(tmp_path / 'identity.json', {'standard': 'identity'}),
        'dist': write(tmp_path / 'dist.json', DEGENERATE_DIST),
        'out': tmp_path / 'out',
    }


def build_explicit(files, complete=False):
    base = str(files['out'] / ('complete' if complete else 'explicit'))
    argv = ['region', '--channel', files['identity'], '--dist', files['dist'], '--kind', 'EXPLICIT', '--out', base]
    assert run(*argv, *(['--complete'] if complete else [])) == EXIT_OK
    return base


# region

def test_region_writes_csv_json_and_manifest(files):
    base = build_explicit(files)
    s = read_region(base + '.csv')
    assert len(s) == 13
    assert s.b[2] == pytest.approx(1.0) and s.b[3] == pytest.approx(1.0)
    assert len(read_region(base + '.json')) == 13
    manifest = read_json(base + '.manifest.json')
    assert manifest['command'] == 'region'
    assert manifest['parameters'] == {'complete': False, 'kind': 'EXPLICIT'}


def test_region_csv_header_is_coordinates_then_rhs(files):
    base = build_explicit(files)
    with open(base + '.csv') as fh:
        lines = fh.read().splitlines()
    assert lines[0] == 'R0,R1,R2,rhs'
    assert len(lines) == 14
    assert read_json(base + '.json')['rows'][0]['label']


def test_region_rejects_malformed_kernel(tmp_path, files, capsys):
    kernel = [0.0] * 16
    for row in range(4):
        kernel[row * 4 + row] = 1.0
    kernel[15] = 0.9
    bad = write(tmp_path / 'bad.json', {'alphabets': {'X1': 2, 'X2': 2, 'Y1': 2, 'Y2': 2}, 'kernel': kernel})
    code = run('region', '--channel', bad, '--dist', files['dist'], '--kind', 'EXPLICIT',
               '--out', str(files['out'] / 'bad'))
    assert code == EXIT_ERROR
    out = capsys.readouterr().out
    assert 'bad.json' in out
    assert 'row 3' in out


def test_dicc_region_from_standard_xor(tmp_path, files):
    xor = write(tmp_path / 'xor.json', {'standard': 'xor'})
    dist = write(tmp_path / 'dicc.json', {'family': 'DICC_EQ59',
                                          'factors': {'V0': [1.0], 'X1': [[0.5, 0.5]], 'X2': [[0.5, 0.5]]}})
    base = str(files['out'] / 'dicc')
    assert run('region', '--channel', xor, '--dist', dist, '--kind', 'DICC', '--out', base) == EXIT_OK
    assert len(read_region(base + '.csv')) == 13


def test_region_family_mismatch_is_error(files):
    code = run('region', '--channel', files['identity'], '--dist', files['dist'], '--kind', 'CMG',
               '--out', str(files['out'] / 'cmg'))
    assert code == EXIT_ERROR


# fme

def test_fme_of_implicit_region_matches_complete_explicit(files):
    implicit = str(files['out'] / 'implicit')
    assert run('region', '--channel', files['identity'], '--dist', files['dist'], '--kind', 'IMPLICIT_M',
               '--out', implicit) == EXIT_OK
    projected = str(files['out'] / 'fme')
    assert run('fme', implicit + '.json', '--eliminate', 'R12,R11,R21,R22',
               '--sum', 'R1=R12+R11', '--sum', 'R2=R21+R22', '--out', projected) == EXIT_OK
    s = read_region(projected + '.csv')
    assert s.coords == ('R0', 'R1', 'R2')
    assert len(s) <= 13
    complete = build_explicit(files, complete=True)
    assert run('diff', complete + '.csv', projected + '.csv') == EXIT_OK


def test_fme_random_instance_matches_complete_explicit(tmp_path, files):
    dist = write(tmp_path / 'binary.json', BINARY_DIST)
    bsc = write(tmp_path / 'bsc.json', {'standard': 'bsc_pair', 'crossover': 0.1})
    out = files['out']
    for kind in ('IMPLICIT_M', 'EXPLICIT'):
        argv = ['region', '--channel', bsc, '--dist', dist, '--kind', kind, '--out', str(out / kind)]
        assert run(*argv, *(['--complete'] if kind == 'EXPLICIT' else [])) == EXIT_OK
    assert run('fme', str(out / 'IMPLICIT_M.csv'), '--eliminate', 'R12,R11,R21,R22', '--sum', 'R1=R12+R11',
               '--sum', 'R2=R21+R22', '--out', str(out / 'fme')) == EXIT_OK
    assert run('diff', str(out / 'EXPLICIT.csv'), str(out / 'fme.csv'), '--grid-step', '0.1') == EXIT_OK


def test_fme_without_elimination_echoes_region(files):
    base = build_explicit(files)
    echoed = str(files['out'] / 'echo')
    assert run('fme', base + '.csv', '--out', echoed) == EXIT_OK
    assert len(read_region(echoed + '.csv')) <= 13
    assert run('diff', base + '.csv', echoed + '.csv') == EXIT_OK


def test_fme_unknown_coordinate(files):
    base = build_explicit(files)
    assert run('fme', base + '.csv', '--eliminate', 'R9', '--out', str(files['out'] / 'x')) == EXIT_ERROR


def test_region_files_round_trip_byte_for_byte(files):
    base = build_explicit(files)
    copy = str(files['out'] / 'copy')
    assert run('fme', base + '.csv', '--no-prune', '--out', copy) == EXIT_OK
    with open(base + '.csv', 'rb') as a, open(copy + '.csv', 'rb') as b:
        assert a.read() == b.read()


# member

def test_member_verdicts(files, capsys):
    base = build_explicit(files)
    assert run('member', base + '.csv', '--point', 'R0=0,R1=0,R2=0') == EXIT_OK
    assert run('member', base + '.csv', '--point', 'R0=0,R1=1.0000000001,R2=0') == EXIT_OK
    capsys.readouterr()
    assert run('member', base + '.csv', '--point', 'R0=0,R1=1.5,R2=0') == EXIT_NEGATIVE
    assert 'I(U1X1;Y1|U0U2)' in capsys.readouterr().out


def test_member_with_wrong_coordinates(files):
    base = build_explicit(files)
    assert run('member', base + '.csv', '--point', 'R0=0,R1=0') == EXIT_ERROR


# diff

def test_diff_counts_one_sided_points(tmp_path):
    wide = tmp_path / 'wide.csv'
    narrow = tmp_path / 'narrow.csv'
    wide.write_text('label,R1,rhs\ncap,1,1\n')
    narrow.write_text('R1,rhs\n1,0.5\n')
    report = tmp_path / 'report'
    assert run('diff', str(wide), str(narrow), '--grid-step', '0.25', '--bbox', '0:1',
               '--out', str(report)) == EXIT_NEGATIVE
    data = read_json(str(report) + '.json')
    assert (data['a_only'], data['b_only'], data['both']) == (2, 0, 3)
    assert run('diff', str(wide), str(wide), '--grid-step', '0.25', '--bbox', '0:1') == EXIT_OK


def test_bad_bbox_is_argument_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run('diff', 'a.csv', 'b.csv', '--bbox', '2:1')
    assert exc.value.code == 2


# simulate

def test_simulate_is_reproducible(tmp_path, files):
    config = write(tmp_path / 'sim.json', {
        'channel': {'standard': 'identity'}, 'dist': 'dist.json',
        'rates': [0.125, 0, 0.125, 0, 0], 'blocklengths': [8, 16], 'trials': 20, 'seed': 3})
    base = str(files['out'] / 'sim')
    outputs = []
    for _ in range(2):
        assert run('simulate', config, '--out', base) == EXIT_OK
        with open(base + '.csv', 'rb') as fh:
            csv_bytes = fh.read()
        with open(base + '.manifest.json', 'rb') as fh:
            outputs.append((csv_bytes, fh.read()))
    assert outputs[0] == outputs[1]
    assert outputs[0][0].decode().splitlines()[0] == 'n,trials,pe1,pe2,pe_max,ci_half_width'


def test_simulate_over_cap_is_error(tmp_path, files):
    config = write(tmp_path / 'big.json', {
        'channel': {'standard': 'identity'}, 'dist': DEGENERATE_DIST,
        'rates': {'R0': 1.0}, 'blocklengths': [30], 'trials': 1})
    assert run('simulate', config, '--out', str(files['out'] / 'big')) == EXIT_ERROR


def test_simulate_config_and_global_config_stay_apart(tmp_path, files):
    args = parse_arguments(['simulate', 'sim.json', '--out', 'o'])
    assert (args.sim_config, args.config) == ('sim.json', None)
    args = parse_arguments(['--config', 'icckit.yaml', 'simulate', 'sim.json', '--out', 'o'])
    assert (args.sim_config, args.config) == ('sim.json', 'icckit.yaml')

    pytest.importorskip('yaml')
    config = write(tmp_path / 'sim.json', {
        'channel': {'standard': 'identity'}, 'dist': 'dist.json',
        'rates': [0.125, 0, 0.125, 0, 0], 'blocklengths': [8], 'trials': 5, 'seed': 3})
    roomy = tmp_path / 'roomy.yaml'
    roomy.write_text('threads: 1\n')
    tight = tmp_path / 'tight.yaml'
    tight.write_text('codebook_cap: 4\n')
    base = str(files['out'] / 'sim')
    assert run('--config', str(roomy), 'simulate', config, '--out', base) == EXIT_OK
    assert read_json(base + '.manifest.json')['inputs'] == [config]
    # the cap comes from the settings file, so the settings file was read
    assert run('--config', str(tight), 'simulate', config, '--out', base) == EXIT_ERROR


# strongcheck, timeshare, union

def test_strongcheck_verdicts(tmp_path, files):
    swap = write(tmp_path / 'swap.json', {'standard': 'swap'})
    assert run('strongcheck', '--channel', swap, '--samples', '10', '--grid-step', '0.5',
               '--out', str(files['out'] / 'strong')) == EXIT_OK
    assert read_json(str(files['out'] / 'strong.json'))['holds'] is True
    assert run('strongcheck', '--channel', files['identity'], '--samples', '5', '--grid-step', '0.5') == EXIT_NEGATIVE


def test_timeshare_command(tmp_path, files):
    binary = write(tmp_path / 'binary.json', BINARY_DIST)
    base = files['out'] / 'ts'
    assert run('timeshare', '--channel', files['identity'], '--dist', files['dist'], '--dist', binary,
               '--alpha', '0.3', '--pairs', '50', '--seed', '1', '--out', str(base)) == EXIT_OK
    assert read_json(str(base) + '.json')['failures'] == []
    assert read_json(str(base) + '.augmented.json')['family'] == 'GENERAL_EQ1'


def test_timeshare_needs_two_distributions(files):
    assert run('timeshare', '--channel', files['identity'], '--dist', files['dist'],
               '--alpha', '0.5') == EXIT_ERROR


def test_union_command(files):
    base = files['out'] / 'witness'
    assert run('union', '--channel', files['identity'], '--point', 'R0=0,R1=1,R2=1', '--include-uniform',
               '--samples', '3', '--out', str(base)) == EXIT_OK
    assert read_json(str(base) + '.json')['family'] == 'GENERAL_EQ1'
    assert run('union', '--channel', files['identity'], '--point', 'R0=3,R1=3,R2=3',
               '--samples', '3') == EXIT_NEGATIVE


def test_missing_config_file_is_error(files):
    assert run('--config', 'missing.yaml', 'member', 'x.csv', '--point', 'R0=0') == EXIT_ERROR


def test_missing_input_file_is_error(files):
    assert run('member', 'nowhere.csv', '--point', 'R0=0') == EXIT_ERROR


# logging

def test_setup_logging_configures_only_the_root_logger():
    others = [logging.getLogger(name) for name in ('matplotlib', 'numexpr')]
    for logger in others:
        logger.setLevel(logging.NOTSET)
    setup_logging(logging.DEBUG)
    assert logging.getLogger().level == logging.DEBUG
    assert [logger.level for logger in others] == [logging.NOTSET] * 2
    setup_logging(logging.WARNING)
    assert logging.getLogger().level == logging.WARNING


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
