# coding=utf-8
import json

from jmespath import search

from lvec.errors import UsageError


def query(document, expression):
    """
    Filter a machine-readable document with a JMESPath expression
    >>> query({'records': [{'status': 'pass'}, {'status': 'fail'}]}, 'records[*].status')
    ['pass', 'fail']
    >>> query({'a': 1}, None)
    {'a': 1}
    """
    if not expression:
        return document
    try:
        return search(expression, document)
    except Exception as e:
        raise UsageError("Invalid query {!r}: {}".format(expression, e), reason="query")


def to_json(document):
    """
    >>> to_json({'term': 'x', 'steps': 0})
    '{\\n  "term": "x",\\n  "steps": 0\\n}'
    """
    return json.dumps(document, indent=2, ensure_ascii=False)


def text_table(rows, headers):
    """
    Left-aligned columns separated by two spaces
    >>> print(text_table([['1', 'pass'], ['12', 'fail']], ['index', 'status']))
    index  status
    1      pass
    12     fail
    """
    rows = [[str(cell) for cell in row] for row in rows]
    widths = [len(header) for header in headers]
    for row in rows:
        for column, cell in enumerate(row):
            widths[column] = max(widths[column], len(cell))
    lines = []
    for row in [list(headers)] + rows:
        cells = [cell.ljust(widths[column]) for column, cell in enumerate(row)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def render(document, fmt="text", expression=None, text=None):
    """
    :param document: JSON-compatible value
    :param fmt: ``text`` or ``json``
    :param expression: optional JMESPath filter, implies a JSON rendering of the selection
    :param text: text rendering used when ``fmt`` is ``text`` and no query is given
    :return: str
    """
    if expression:
        selected = query(document, expression)
        if fmt == "text" and isinstance(selected, str):
            return selected
        return to_json(selected)
    if fmt == "json" or text is None:
        return to_json(document)
    return text
