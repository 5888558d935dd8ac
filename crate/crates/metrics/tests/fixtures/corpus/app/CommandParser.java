package app;

import java.util.ArrayList;
import java.util.List;

public class CommandParser {
    private final List<String> errors = new ArrayList<>();

    public int parse(String[] args) {
        int i = 0;
        int flags = 0;
        do {
            String a = args[i];
            switch (a) {
                case "-v":
                case "--verbose":
                    flags |= 1;
                    break;
                case "-q":
                    flags |= 2;
                    break;
                default:
                    errors.add(a);
            }
            i++;
        } while (i < args.length);
        return flags;
    }

    public int parseNumber(String s) {
        try {
            return Integer.parseInt(s.trim());
        } catch (NumberFormatException e) {
            errors.add(s);
            return -1;
        } finally {
            errors.removeIf(x -> x.isEmpty());
        }
    }

    public boolean hasErrors() {
        return !errors.isEmpty();
    }
}
