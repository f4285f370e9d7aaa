package fixtures.collections;

import java.util.Arrays;

public class IntStack {

    private int[] items;
    private int size;

    public IntStack() {
        this(8);
    }

    public IntStack(int capacity) {
        items = new int[capacity];
    }

    public void push(int value) {
        if (size == items.length) {
            grow();
        }
        items[size++] = value;
    }

    public int pop() {
        if (size == 0) {
            throw new IllegalStateException("empty stack");
        }
        return items[--size];
    }

    public int peek() {
        if (isEmpty()) {
            throw new IllegalStateException("empty stack");
        }
        return items[size - 1];
    }

    public boolean isEmpty() {
        return size == 0;
    }

    public int size() {
        return size;
    }

    private void grow() {
        items = Arrays.copyOf(items, items.length * 2);
    }

    public boolean contains(int value) {
        for (int i = 0; i < size; i++) {
            if (items[i] == value) {
                return true;
            }
        }
        return false;
    }

    public void clear() {
        while (!isEmpty()) {
            pop();
        }
    }

    @Override
    public String toString() {
        StringBuilder sb = new StringBuilder("[");
        for (int i = 0; i < size; i++) {
            if (i > 0) {
                sb.append(", ");
            }
            sb.append(items[i]);
        }
        return sb.append("]").toString();
    }

    private static class Node {
        int value;

        int doubled() {
            return value * 2;
        }
    }
}
