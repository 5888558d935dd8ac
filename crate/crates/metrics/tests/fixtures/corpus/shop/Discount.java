package shop;

public interface Discount {
    double apply(double amount);
}
