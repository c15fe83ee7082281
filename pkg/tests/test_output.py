import io
import json
import math
import unittest

from tcoulomb.output import format_value, read_csv, render_table, write_table
from tcoulomb.version import __version__


ROWS = [
    {'curve_id': 'nu=0,l=0', 'beta': 2.0, 'alpha': 1.0, 'source': 'exact'},
    {'curve_id': 'nu=0,l=0', 'beta': 7.0980762113533156, 'alpha': 2.3660254037844384, 'source': 'exact'},
    {'curve_id': 'nu=0,l=0', 'beta': 1.0 / 3.0, 'alpha': math.pi, 'source': 'interpolated'},
]
COLUMNS = ['curve_id', 'beta', 'alpha', 'source']


class TestFormatValue(unittest.TestCase):
    def test_floats_keep_every_bit(self):
        for value in (1.0 / 3.0, math.pi, 6.854786377, 1e-300, -2.5e17):
            self.assertEqual(float(format_value(value)), value)

    def test_other_values(self):
        self.assertEqual(format_value(None), '')
        self.assertEqual(format_value(True), 'true')
        self.assertEqual(format_value(3), '3')
        self.assertEqual(format_value((1.0, 0.5)), '1 0.5')


class TestCsv(unittest.TestCase):
    def test_header_metadata(self):
        text = render_table(ROWS, COLUMNS, 'tcoulomb curve --nu 0 --l 0')
        lines = text.splitlines()
        self.assertEqual(lines[0], f"# tool: tcoulomb {__version__}")
        self.assertEqual(lines[1], "# schema: 1")
        self.assertEqual(lines[2], "# command: tcoulomb curve --nu 0 --l 0")
        self.assertEqual(lines[3], ','.join(COLUMNS))

    def test_parsed_values_match(self):
        meta, rows = read_csv(io.StringIO(render_table(ROWS, COLUMNS, 'cmd')))
        self.assertEqual(meta['command'], 'cmd')
        self.assertEqual(len(rows), len(ROWS))
        for parsed, original in zip(rows, ROWS):
            self.assertEqual(float(parsed['beta']), original['beta'])
            self.assertEqual(float(parsed['alpha']), original['alpha'])
            self.assertEqual(parsed['source'], original['source'])

    def test_deterministic(self):
        self.assertEqual(render_table(ROWS, COLUMNS, 'cmd'), render_table(list(ROWS), COLUMNS, 'cmd'))

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            write_table(ROWS, COLUMNS, io.StringIO(), 'cmd', 'xml')


class TestJson(unittest.TestCase):
    def test_same_fields_as_csv(self):
        document = json.loads(render_table(ROWS, COLUMNS, 'cmd', 'json', {'passed': True}))
        self.assertEqual(document['tool'], f"tcoulomb {__version__}")
        self.assertEqual(document['command'], 'cmd')
        self.assertEqual(document['columns'], COLUMNS)
        self.assertEqual(document['rows'][2]['alpha'], math.pi)
        self.assertTrue(document['passed'])

    def test_nan_becomes_null(self):
        document = json.loads(render_table([{'beta': float('nan')}], ['beta'], 'cmd', 'json'))
        self.assertIsNone(document['rows'][0]['beta'])


if __name__ == '__main__':
    unittest.main()
