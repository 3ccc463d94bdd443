"""Energy parametrizations, linear energy forms and closed-form averages."""
