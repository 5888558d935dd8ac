package util;

public class MathUtils {
    public static int gcd(int a, int b) {
        return b == 0 ? a : gcd(b, a % b);
    }

    public static boolean isPrime(int n) {
        if (n < 2) {
            return false;
        }
        for (int d = 2; d * d <= n; d++) {
            if (n % d == 0) {
                return false;
            }
        }
        return true;
    }

    public static int[] findPair(int[][] grid, int target) {
        int[] found = null;
        outer:
        for (int r = 0; r < grid.length; r++) {
            for (int c = 0; c < grid[r].length; c++) {
                if (grid[r][c] == target) {
                    found = new int[] {r, c};
                    break outer;
                }
            }
        }
        return found;
    }

    public static int sumOdd(int[] values) {
        int total = 0;
        for (int v : values) {
            if (v % 2 == 0) {
                continue;
            }
            total += v;
        }
        return total;
    }
}
