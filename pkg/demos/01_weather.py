# # Plausible reasoning about the weather
#
# A rule says rain usually brings clouds (strength high), while clouds only
# sometimes mean rain (inverse low). We ask the engine about Paris in both
# directions and read the explanations.

from pkn import KnowledgeGraph, explain, parse_condition
from pkn.argumentation import ask

RULE = ("weather of ?place includes rainy implies weather of ?place includes cloudy "
        "(strength high, inverse low)")

# ## Forward: it is raining, is it cloudy?

graph = KnowledgeGraph.from_text(RULE + "\nweather of Paris includes rainy (certainty high)")
verdict = ask(graph, parse_condition("weather of Paris includes cloudy"))
print(verdict.summary())
print(explain(verdict, graph))

# The rule strength (high) and the fact certainty (high) combine by taking
# the weakest link, so the conclusion is high.

# ## Backward: it is cloudy, is it raining?

graph = KnowledgeGraph.from_text(RULE + "\nweather of Paris includes cloudy")
verdict = ask(graph, parse_condition("weather of Paris includes rainy"))
print(verdict.summary())
print(explain(verdict, graph))

# Running the rule backwards uses its inverse weight, so only low support.

# ## Nothing known

verdict = ask(graph, parse_condition("weather of Rome includes rainy"))
print(verdict.summary())
