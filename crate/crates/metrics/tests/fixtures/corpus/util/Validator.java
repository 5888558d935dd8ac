package util;

public class Validator {
    private int minLength = 8;

    public boolean validPassword(String p) {
        if (p == null || p.length() < minLength) {
            return false;
        }
        boolean digit = false;
        boolean upper = false;
        for (int i = 0; i < p.length(); i++) {
            char c = p.charAt(i);
            if (Character.isDigit(c)) {
                digit = true;
            } else if (Character.isUpperCase(c)) {
                upper = true;
            }
        }
        return digit && upper;
    }

    public String grade(int score) {
        return score >= 90 ? "A" : score >= 75 ? "B" : score >= 50 ? "C" : "F";
    }

    public boolean inRange(int value, int low, int high) {
        return value >= low && value <= high;
    }
}
