pub mod linear_positivity;
