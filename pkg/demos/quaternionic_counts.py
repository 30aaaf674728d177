"""Print m_H, the verdict and the binary polyhedral quotients of a few groups."""
from eichlerkit import classify, get_group
from eichlerkit.quotients import binary_polyhedral_quotients, m_h

for expr in ["Q(24)", "BT x C(2)", "Q8:Q12", "BT x Q(12)", "Q(8) x C(3)", "Q8:BO"]:
    g = get_group(expr)
    names = [n for n, _ in binary_polyhedral_quotients(g)[1]]
    v = classify(g)
    print(f"{g.name:<14} order={g.order():<6} mH={m_h(g):<3} maximal BPG quotients={names}  {v.status} ({v.rule})")
