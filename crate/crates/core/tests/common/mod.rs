pub mod dt_oracle;
