pub mod fock_space;
