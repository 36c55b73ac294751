from actin_automaton.main import main

main()
