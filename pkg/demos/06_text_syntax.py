"""
Writing operators as text
=========================
"""

from superspin.dsl import DslError, parse
from superspin.expressions import render
from superspin.sugawara import build_T

e = parse("(1/(2*N^2)) * no(beta(+,i), psi(-,i), beta(-,j), psi(+,j))")
print(e)
print(parse("delta(i,j) * psi(+,j) + db(psib(-,i))"))

T = build_T("osp22").expr
assert parse(render(T)) == T

for bad in ("no(psi(+,i) psi(-,i))", "no(psi(+,i), psi(+,i), psi(+,i))"):
    try:
        parse(bad)
    except DslError as exc:
        print(exc)
