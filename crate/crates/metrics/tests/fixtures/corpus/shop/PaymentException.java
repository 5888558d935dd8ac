package shop;
public class PaymentException extends Exception {
    public PaymentException(String m) { super(m); }
}
