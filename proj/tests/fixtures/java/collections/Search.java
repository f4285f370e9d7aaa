package fixtures.collections;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

public abstract class Search {

    public abstract int score(int item);

    public static int binarySearch(int[] data, int key) {
        int lo = 0;
        int hi = data.length - 1;
        while (lo <= hi) {
            int mid = (lo + hi) >>> 1;
            if (data[mid] < key) {
                lo = mid + 1;
            } else if (data[mid] > key) {
                hi = mid - 1;
            } else {
                return mid;
            }
        }
        return -(lo + 1);
    }

    public static int indexOf(int[] data, int key) {
        for (int i = 0; i < data.length; i++) {
            if (data[i] == key) {
                return i;
            }
        }
        return -1;
    }

    public static int maxIndex(int[] data) {
        int best = 0;
        for (int i = 1; i < data.length; i++) {
            if (data[i] > data[best]) {
                best = i;
            }
        }
        return best;
    }

    public static Map<String, Integer> histogram(List<String> words) {
        Map<String, Integer> counts = new HashMap<>();
        for (String w : words) {
            counts.put(w, counts.getOrDefault(w, 0) + 1);
        }
        return counts;
    }

    public static List<Integer> evens(int n) {
        List<Integer> out = new ArrayList<>();
        for (int i = 0; i < n; i += 2) {
            out.add(i);
        }
        return out;
    }

    public static void bubbleSort(int[] data) {
        boolean swapped = true;
        while (swapped) {
            swapped = false;
            for (int i = 1; i < data.length; i++) {
                if (data[i - 1] > data[i]) {
                    int tmp = data[i];
                    data[i] = data[i - 1];
                    data[i - 1] = tmp;
                    swapped = true;
                }
            }
        }
    }

    public int bestScore(int[] items) throws IllegalArgumentException {
        if (items.length == 0) {
            throw new IllegalArgumentException("no items");
        }
        int best = score(items[0]);
        for (int i = 1; i < items.length; i++) {
            best = Math.max(best, score(items[i]));
        }
        return best;
    }

    public static int countMatches(List<String> words, String prefix) {
        return (int) words.stream().filter(w -> w.startsWith(prefix)).count();
    }

    public static int depth(int n) {
        return n <= 1 ? 0 : 1 + depth(n / 2);
    }

    public Runnable task() {
        return new Runnable() {
            @Override
            public void run() {
                System.out.println("anonymous");
            }
        };
    }
}
