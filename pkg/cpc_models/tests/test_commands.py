import unittest

from cpc_models.commands import Command, EMPTY, FactoredCommand, as_commands
from cpc_models.exceptions import ValidationError


class CommandTests(unittest.TestCase):
    def test_from_string_and_ints(self):
        self.assertEqual(Command('0110'), Command([0, 1, 1, 0]))
        self.assertEqual(list(Command('101')), [1, 0, 1])
        self.assertEqual(len(Command('101')), 3)

    def test_rejects_non_binary(self):
        with self.assertRaises(ValidationError):
            Command('012')
        with self.assertRaises(ValidationError):
            Command([0, 2])

    def test_concatenation(self):
        self.assertEqual(Command('01') + Command('1'), Command('011'))
        self.assertEqual(Command('01') + '10', Command('0110'))

    def test_empty_is_identity(self):
        b = Command('1101')
        self.assertEqual(EMPTY + b, b)
        self.assertEqual(b + EMPTY, b)
        self.assertEqual(len(EMPTY), 0)

    def test_concatenation_is_associative(self):
        a, b, c = Command('1'), Command('00'), Command('101')
        self.assertEqual((a + b) + c, a + (b + c))

    def test_hashable(self):
        table = {Command('01'): 'x'}
        self.assertEqual(table[Command([0, 1])], 'x')
        self.assertNotIn(Command('10'), table)

    def test_shortlex_order(self):
        obs = sorted(as_commands(['11', '0', '', '10', '1']))
        self.assertEqual([str(b) for b in obs], ['', '0', '1', '10', '11'])

    def test_splits(self):
        obs = [(str(h), str(t)) for h, t in Command('011').splits()]
        self.assertEqual(obs, [('0', '11'), ('01', '1')])
        self.assertEqual(list(Command('1').splits()), [])

    def test_not_equal_to_str(self):
        self.assertNotEqual(Command('01'), '01')


class FactoredCommandTests(unittest.TestCase):
    def test_flatten(self):
        f = FactoredCommand('1', '00', '')
        self.assertEqual(f.flatten(), Command('100'))
        self.assertEqual(str(f), '1|00|')

    def test_coerces_parts(self):
        f = FactoredCommand('1', [0, 1], Command('1'))
        self.assertEqual(f.b_U, Command('01'))

    def test_invalid_part(self):
        with self.assertRaises(ValidationError):
            FactoredCommand('1', 'x', '0')


if __name__ == '__main__':
    unittest.main()
